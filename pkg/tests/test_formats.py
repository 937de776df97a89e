import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mdowker.bifiltration import BuildParams, build_measure_dowker
from mdowker.core import BifilteredComplex, HilbertGrid, LambdaMatrix
from mdowker.formats import (
    InputError,
    format_bifiltration,
    format_hilbert_csv,
    format_pgm,
    parse_bifiltration,
    parse_matrix_csv,
)
from mdowker.relations import distance_lambda, random_uniform_lambda


def test_matrix_csv_rules():
    text = "# comment\nx,y\n1,2\n\n3.5,-4e-3\n"
    with pytest.raises(InputError, match="line 2"):
        parse_matrix_csv(text)
    np.testing.assert_array_equal(parse_matrix_csv(text.replace("x,y\n", "")), [[1, 2], [3.5, -0.004]])
    np.testing.assert_array_equal(parse_matrix_csv("a,b\n1,2\n", header=True), [[1, 2]])


def test_matrix_csv_errors():
    with pytest.raises(InputError, match="line 2"):
        parse_matrix_csv("1,2\n3\n")
    with pytest.raises(InputError, match="line 1"):
        parse_matrix_csv("nan,1\n")
    with pytest.raises(InputError):
        parse_matrix_csv("# only comments\n")


def test_bifiltration_text_layout():
    C = BifilteredComplex.from_lists([((0,), [(1, 0.0), (2, 0.1)]), ((0, 1), [(1, 0.5)])])
    text = format_bifiltration(C)
    assert text.splitlines() == [
        "bifiltration-dowker v1",
        "axes: r weight-reversed",
        "0 ; 0 1 0.10000000000000001 2",
        "0 1 ; 0.5 1",
    ]
    neg = format_bifiltration(C, negate_weight=True).splitlines()
    assert neg[1] == "axes: r weight-negated"
    assert neg[2] == "0 ; 0 -1 0.10000000000000001 -2"


@given(st.integers(1, 5), st.integers(1, 6), st.integers(0, 10**6), st.booleans())
@settings(max_examples=30, deadline=None)
def test_round_trip(rows, cols, seed, negate):
    L = random_uniform_lambda(rows, cols, seed)
    C = build_measure_dowker(L, BuildParams(m_max=cols, dim_max=rows - 1))
    assert parse_bifiltration(format_bifiltration(C, negate_weight=negate)) == C


def test_negate_weight_inverse():
    C = build_measure_dowker(distance_lambda(np.eye(3), np.eye(3)), BuildParams(m_max=3, dim_max=2))
    plain = format_bifiltration(C).splitlines()
    neg = format_bifiltration(C, negate_weight=True).splitlines()
    restored = []
    for line in neg[2:]:
        left, right = line.split(" ; ")
        tokens = right.split()
        tokens[1::2] = [str(-int(t)) for t in tokens[1::2]]
        restored.append(left + " ; " + " ".join(tokens))
    assert restored == plain[2:]


def test_round_trip_empty_and_fractional_weights():
    empty = build_measure_dowker(LambdaMatrix([[5.0]]), BuildParams(r_max=1.0))
    assert parse_bifiltration(format_bifiltration(empty)) == empty
    frac = BifilteredComplex.from_lists([((0,), [(0.5, 0.25), (1.5, 1 / 3)])])
    assert parse_bifiltration(format_bifiltration(frac)) == frac


def test_parse_errors_name_the_line():
    with pytest.raises(InputError, match="line 1"):
        parse_bifiltration("nope\naxes: r weight-reversed\n")
    with pytest.raises(InputError, match="line 2"):
        parse_bifiltration("bifiltration-dowker v1\naxes: sideways\n")
    with pytest.raises(InputError, match="line 3"):
        parse_bifiltration("bifiltration-dowker v1\naxes: r weight-reversed\n0 ; 0.5\n")
    with pytest.raises(InputError, match="line 4"):
        parse_bifiltration("bifiltration-dowker v1\naxes: r weight-reversed\n0 ; 0 1\nx ; 0 1\n")


def test_hilbert_csv():
    g = HilbertGrid((1, 2), (0.0, 0.5), np.array([[1, 2], [0, 3]]), 1)
    assert format_hilbert_csv(g).splitlines() == ["m\\r,0,0.5", "1,1,2", "2,0,3"]


def test_pgm():
    g = HilbertGrid((1, 2), (0.0, 0.5, 1.0), np.array([[0, 1, 3], [3, 0, 0]]), 1)
    lines = format_pgm(g).splitlines()
    assert lines[:3] == ["P2", "3 2", "255"]
    expected = round(255 * math.log(2) / math.log(4))
    assert lines[3] == f"0 {expected} 255"
    assert lines[4] == "255 0 0"
    zero = HilbertGrid((1,), (0.0, 1.0), np.zeros((1, 2)), 0)
    assert format_pgm(zero).splitlines()[3] == "0 0"
