"""Exhaustive Dowker constructions used to check duality statements.

Everything here enumerates subsets and flags directly; the guards keep the
instances small enough for that to be sensible and raise instead of
truncating.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field

import numpy as np

from .core import GuardError, LambdaMatrix, SimplicialComplex
from .homology import betti_numbers
from .relations import transpose_lambda

__all__ = [
    "DualityReport",
    "check_dowker_duality",
    "check_total_weight_duality",
    "dowker_complex_at",
    "subdivision_filtration",
    "total_weight",
    "total_weight_complex",
]

MAX_VERTICES = 16
DEGREES = 2


def _guard_vertices(L: LambdaMatrix) -> None:
    if L.row_count > MAX_VERTICES:
        raise GuardError(f"{L.row_count} vertices exceeds the exhaustive limit of {MAX_VERTICES}")


def dowker_complex_at(L: LambdaMatrix, r: float, dim_cap: int | None = None) -> SimplicialComplex:
    """Dowker complex of the relation ``L <= r``: subsets of rows sharing a witness column."""
    _guard_vertices(L)
    rel = L.relation(r)
    top = L.row_count if dim_cap is None else dim_cap + 1
    simplices = set()
    for column in rel.T:
        rows = tuple(np.flatnonzero(column).tolist())
        for size in range(1, min(top, len(rows)) + 1):
            simplices.update(itertools.combinations(rows, size))
    return SimplicialComplex(simplices, check=False)


def total_weight(sigma, L: LambdaMatrix, r: float) -> int:
    """Number of witness columns related to every vertex of ``sigma``."""
    rel = L.relation(r)
    return int(np.count_nonzero(rel[list(sigma)].all(axis=0)))


def total_weight_complex(L: LambdaMatrix, r: float, m: float, dim_cap: int | None = None) -> SimplicialComplex:
    """Superlevel set ``{sigma : total_weight(sigma) >= m}`` of the Dowker complex."""
    K = dowker_complex_at(L, r, dim_cap)
    rel = L.relation(r)
    return SimplicialComplex(
        (s for s in K if np.count_nonzero(rel[list(s)].all(axis=0)) >= m), check=False)


def subdivision_filtration(K: SimplicialComplex, m: float, flag_cap: int = 200_000,
                           max_dim: int | None = None) -> SimplicialComplex:
    """Flags ``s_0 < s_1 < ... < s_k`` of ``K`` whose smallest simplex has at least ``m`` vertices.

    Each simplex of ``K`` becomes one vertex, numbered by the lexicographic
    order of the vertex tuples.  ``max_dim`` limits the flag length (k);
    ``flag_cap`` bounds the number of flags produced.
    """
    ordered = sorted(K.simplices)
    ids = {s: i for i, s in enumerate(ordered)}
    sets = [frozenset(s) for s in ordered]
    bigger = [[j for j, t in enumerate(sets) if len(t) > len(s) and s < t] for s in sets]
    top = len(ordered) if max_dim is None else max_dim
    flags: list[tuple[int, ...]] = []

    def extend(chain: list[int]) -> None:
        flags.append(tuple(sorted(chain)))
        if len(flags) > flag_cap:
            raise GuardError(f"subdivision has more than {flag_cap} flags")
        if len(chain) > top:
            return
        for j in bigger[chain[-1]]:
            chain.append(j)
            extend(chain)
            chain.pop()

    for s in ordered:
        if len(s) >= m:
            extend([ids[s]])
    return SimplicialComplex(flags, check=False)


@dataclass
class DualityReport:
    """Per-(m, degree) Betti comparison; ``rows`` hold (kind, m, degree, lhs, rhs)."""

    rows: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(lhs == rhs for _, _, _, lhs, rhs in self.rows)

    def mismatches(self) -> list:
        return [row for row in self.rows if row[3] != row[4]]

    def extend(self, other: "DualityReport") -> None:
        self.rows.extend(other.rows)

    def to_text(self) -> str:
        lines = []
        for kind, m, degree, lhs, rhs in self.rows:
            status = "ok" if lhs == rhs else "MISMATCH"
            lines.append(f"{kind} m={m} H{degree}: {lhs} vs {rhs} {status}")
        lines.append("PASS" if self.passed else f"FAIL ({len(self.mismatches())} mismatches)")
        return "\n".join(lines) + "\n"

    def to_csv(self, instance=0, header: bool = True) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if header:
            writer.writerow(["instance", "kind", "m", "degree", "lhs", "rhs", "match"])
        for kind, m, degree, lhs, rhs in self.rows:
            writer.writerow([instance, kind, m, degree, lhs, rhs, int(lhs == rhs)])
        return buf.getvalue()


def check_total_weight_duality(L: LambdaMatrix, r: float, m_range) -> DualityReport:
    """Compare Betti numbers (degrees 0-2) of the weight-m Dowker complex of
    ``L <= r`` with those of the subdivision filtration at ``m`` of the
    transposed Dowker complex."""
    _guard_vertices(L)
    Lt = transpose_lambda(L)
    _guard_vertices(Lt)
    dual = dowker_complex_at(Lt, r)
    report = DualityReport()
    for m in m_range:
        lhs = betti_numbers(total_weight_complex(L, r, m, dim_cap=DEGREES + 1), DEGREES)
        rhs = betti_numbers(subdivision_filtration(dual, m, max_dim=DEGREES + 1), DEGREES)
        for degree in range(DEGREES + 1):
            report.rows.append(("total-weight", m, degree, lhs[degree], rhs[degree]))
    return report


def check_dowker_duality(L: LambdaMatrix, r: float) -> DualityReport:
    """Betti numbers (degrees 0-2) of the Dowker complex and of its transpose."""
    _guard_vertices(L)
    Lt = transpose_lambda(L)
    _guard_vertices(Lt)
    lhs = betti_numbers(dowker_complex_at(L, r, DEGREES + 1), DEGREES)
    rhs = betti_numbers(dowker_complex_at(Lt, r, DEGREES + 1), DEGREES)
    return DualityReport([("classical", 1, d, lhs[d], rhs[d]) for d in range(DEGREES + 1)])
