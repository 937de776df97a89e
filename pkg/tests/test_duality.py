import numpy as np
import pytest

from mdowker.bifiltration import BuildParams, build_measure_dowker, slice_complex
from mdowker.core import GuardError, LambdaMatrix, SimplicialComplex
from mdowker.duality import (
    DualityReport,
    check_dowker_duality,
    check_total_weight_duality,
    dowker_complex_at,
    subdivision_filtration,
    total_weight,
    total_weight_complex,
)
from mdowker.homology import betti_numbers
from mdowker.relations import make_rng, random_uniform_lambda


def test_dowker_complex_of_four_row_relation(four_row_relation):
    K = dowker_complex_at(LambdaMatrix.from_indicator(four_row_relation), 0.0)
    assert (0, 1, 2) in K and (0, 3) in K and (2, 3) in K
    assert (1, 3) not in K
    assert betti_numbers(K, 2) == [1, 1, 0]


def test_total_weight(four_row_relation):
    L = LambdaMatrix.from_indicator(four_row_relation)
    assert total_weight((0,), L, 0.0) == 3
    assert total_weight((0, 1), L, 0.0) == 2
    assert total_weight((0, 1, 2), L, 0.0) == 1
    assert total_weight((1, 3), L, 0.0) == 0


def test_subdivision_of_edge():
    K = SimplicialComplex([(0, 1)], close=True)
    S1 = subdivision_filtration(K, 1)
    assert S1.f_vector() == [3, 2]
    assert subdivision_filtration(K, 2).f_vector() == [1]
    assert len(subdivision_filtration(K, 3)) == 0


def test_subdivision_of_triangle_is_disk():
    K = SimplicialComplex([(0, 1, 2)], close=True)
    S = subdivision_filtration(K, 1)
    assert S.f_vector() == [7, 12, 6]
    assert betti_numbers(S, 2) == [1, 0, 0]
    # flags starting at an edge: star of the barycentre minus the vertices
    assert betti_numbers(subdivision_filtration(K, 2), 1) == [1, 0]


def test_subdivision_max_dim_truncates_flags():
    K = SimplicialComplex([(0, 1, 2, 3)], close=True)
    assert subdivision_filtration(K, 1, max_dim=1).dimension == 1
    assert subdivision_filtration(K, 1).dimension == 3


def test_subdivision_guard():
    K = SimplicialComplex([tuple(range(7))], close=True)
    with pytest.raises(GuardError):
        subdivision_filtration(K, 1, flag_cap=1000)


def test_vertex_guard():
    with pytest.raises(GuardError):
        dowker_complex_at(LambdaMatrix(np.zeros((17, 2))), 0.0)


def test_total_weight_complex_agrees_with_bifiltration():
    for seed in range(15):
        L = random_uniform_lambda(5, 6, seed)
        C = build_measure_dowker(L, BuildParams(m_max=6, dim_max=4))
        for m in range(1, 7):
            for r in (0.1, 0.2, 0.3, 0.45):
                assert slice_complex(C, m, r) == total_weight_complex(L, 2 * r, m)


def test_four_row_relation_duality(four_row_relation):
    L = LambdaMatrix.from_indicator(four_row_relation)
    report = check_total_weight_duality(L, 0.0, range(1, 6))
    assert report.passed
    classical = check_dowker_duality(L, 0.0)
    assert [row[3:] for row in classical.rows] == [(1, 1), (1, 1), (0, 0)]


def test_random_duality_batch():
    rng = make_rng(123)
    for _ in range(15):
        rows, cols = rng.integers(1, 6, size=2)
        L = LambdaMatrix.from_indicator(rng.random((rows, cols)) < 0.5)
        assert check_total_weight_duality(L, 0.0, range(1, rows + 2)).passed


def test_report_detects_mismatch_and_renders():
    report = DualityReport([("total-weight", 1, 0, 1, 1), ("total-weight", 1, 1, 0, 2)])
    assert not report.passed
    assert report.mismatches() == [("total-weight", 1, 1, 0, 2)]
    assert report.to_text().rstrip().endswith("FAIL (1 mismatches)")
    csv = report.to_csv(instance=4).splitlines()
    assert csv[0] == "instance,kind,m,degree,lhs,rhs,match"
    assert csv[2] == "4,total-weight,1,1,0,2,0"


def test_hollow_tetrahedron_duality():
    # every witness misses exactly one vertex: the Dowker complex is a 2-sphere
    L = LambdaMatrix.from_indicator(~np.eye(4, dtype=bool))
    assert betti_numbers(dowker_complex_at(L, 0.0), 2) == [1, 0, 1]
    report = check_total_weight_duality(L, 0.0, range(1, 5))
    assert report.passed
    assert [row[3] for row in report.rows if row[1] == 1] == [1, 0, 1]
    assert check_dowker_duality(L, 0.0).passed
