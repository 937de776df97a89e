"""Text formats: point/lambda CSV input, bifiltration files, Hilbert CSV and PGM heatmaps."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .core import BifilteredComplex, HilbertGrid

__all__ = [
    "InputError",
    "format_bifiltration",
    "format_hilbert_csv",
    "format_pgm",
    "parse_bifiltration",
    "parse_matrix_csv",
    "read_matrix_csv",
]

MAGIC = "bifiltration-dowker v1"
AXES = {False: "axes: r weight-reversed", True: "axes: r weight-negated"}


class InputError(ValueError):
    """Malformed input file; the message names the offending line."""


def read_matrix_csv(path, header: bool = False) -> np.ndarray:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_matrix_csv(text, header)


def parse_matrix_csv(text: str, header: bool = False) -> np.ndarray:
    """Dense real matrix from comma-separated text.

    Lines starting with ``#`` and blank lines are skipped; with ``header``
    the first line is skipped as well.
    """
    rows, width = [], None
    for lineno, line in enumerate(text.splitlines(), start=1):
        if header and lineno == 1:
            continue
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            row = [float(field) for field in stripped.split(",")]
        except ValueError:
            raise InputError(f"line {lineno}: expected comma-separated reals, got {line!r}") from None
        if not all(math.isfinite(x) for x in row):
            raise InputError(f"line {lineno}: non-finite value")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise InputError(f"line {lineno}: {len(row)} fields, expected {width}")
        rows.append(row)
    if not rows:
        raise InputError("no data rows")
    return np.array(rows, dtype=np.float64)


def _fmt(x) -> str:
    x = float(x)
    if x.is_integer() and abs(x) < 2 ** 53:
        return str(int(x))
    return format(x, ".17g")


def format_bifiltration(C: BifilteredComplex, negate_weight: bool = False) -> str:
    sign = -1 if negate_weight else 1
    out = [MAGIC, AXES[negate_weight]]
    for simplex, pairs in C.items():
        body = " ".join(f"{format(float(r), '.17g')} {_fmt(sign * m)}" for m, r in pairs)
        out.append(" ".join(map(str, simplex)) + " ; " + body)
    return "\n".join(out) + "\n"


def _number(token: str, lineno: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise InputError(f"line {lineno}: bad number {token!r}") from None


def parse_bifiltration(text: str) -> BifilteredComplex:
    """Inverse of :func:`format_bifiltration`; weights come back positive."""
    lines = text.splitlines()
    if len(lines) < 2 or lines[0].strip() != MAGIC:
        raise InputError(f"line 1: expected {MAGIC!r}")
    axes = lines[1].strip()
    if axes not in AXES.values():
        raise InputError(f"line 2: unknown axes declaration {axes!r}")
    sign = -1 if axes == AXES[True] else 1
    items, integral = [], True
    for lineno, line in enumerate(lines[2:], start=3):
        if not line.strip():
            continue
        if line.count(";") != 1:
            raise InputError(f"line {lineno}: expected '<vertices> ; <r m pairs>'")
        left, right = line.split(";")
        try:
            simplex = tuple(int(v) for v in left.split())
        except ValueError:
            raise InputError(f"line {lineno}: vertices must be integers") from None
        tokens = right.split()
        if not simplex or not tokens or len(tokens) % 2:
            raise InputError(f"line {lineno}: need vertices and an even number of bidegree fields")
        pairs = []
        for r_tok, m_tok in zip(tokens[::2], tokens[1::2]):
            m = sign * _number(m_tok, lineno)
            integral &= float(m).is_integer()
            pairs.append((m, _number(r_tok, lineno)))
        items.append((simplex, pairs))
    if integral:
        items = [(s, [(int(m), r) for m, r in pairs]) for s, pairs in items]
    try:
        return BifilteredComplex.from_lists(items)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def format_hilbert_csv(grid: HilbertGrid) -> str:
    head = ["m\\r"] + [format(float(r), ".17g") for r in grid.r_values]
    rows = [",".join(head)]
    for m, values in zip(grid.m_values, grid.betti):
        rows.append(",".join([_fmt(m)] + [str(int(v)) for v in values]))
    return "\n".join(rows) + "\n"


def format_pgm(grid: HilbertGrid) -> str:
    """ASCII greymap, one pixel row per m (ascending), log-scaled to 0..255."""
    b = np.asarray(grid.betti, dtype=np.float64)
    vmax = b.max() if b.size else 0.0
    if vmax > 0:
        gray = np.rint(255 * np.log1p(b) / np.log1p(vmax)).astype(np.int64)
    else:
        gray = np.zeros(b.shape, dtype=np.int64)
    height, width = b.shape
    lines = ["P2", f"{width} {height}", "255"]
    lines += [" ".join(map(str, row)) for row in gray.tolist()]
    return "\n".join(lines) + "\n"
