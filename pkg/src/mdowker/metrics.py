"""Hausdorff and Prokhorov distances, and the correspondence interleaving check."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx
import numpy as np

from .bifiltration import BuildParams
from .core import EmpiricalMeasure, PointCloud
from .relations import pairwise_distances

__all__ = [
    "PreconditionError",
    "StabilityReport",
    "check_stability_lemma",
    "hausdorff",
    "prokhorov",
]


class PreconditionError(ValueError):
    """Inputs do not satisfy the hypotheses of a check (as opposed to the check failing)."""


def _metric_guard(metric: str) -> None:
    if metric != "euclidean":
        raise ValueError(f"metric {metric!r} is not supported here: only 'euclidean' satisfies the triangle inequality")


def hausdorff(X1, X2, metric: str = "euclidean") -> float:
    """Two-sided Hausdorff distance between finite clouds."""
    _metric_guard(metric)
    X1 = X1 if isinstance(X1, PointCloud) else PointCloud(X1)
    X2 = X2 if isinstance(X2, PointCloud) else PointCloud(X2)
    if len(X1) == 0 or len(X2) == 0:
        raise ValueError("Hausdorff distance needs non-empty clouds")
    D = pairwise_distances(X1, X2)
    return float(max(D.min(axis=1).max(), D.min(axis=0).max()))


def _transport_mass(D: np.ndarray, a: np.ndarray, b: np.ndarray, eps: float) -> int:
    """Max flow from masses ``a`` to ``b`` along pairs at distance <= eps (integer units)."""
    G = nx.DiGraph()
    for i, w in enumerate(a.tolist()):
        G.add_edge("s", ("a", i), capacity=w)
    for j, w in enumerate(b.tolist()):
        G.add_edge(("b", j), "t", capacity=w)
    for i, j in zip(*np.nonzero(D <= eps)):
        G.add_edge(("a", int(i)), ("b", int(j)))
    if not G.has_node("s") or not G.has_node("t"):
        return 0
    return nx.maximum_flow_value(G, "s", "t")


def prokhorov(mu: EmpiricalMeasure, nu: EmpiricalMeasure, metric: str = "euclidean",
              probability: bool = True) -> Fraction:
    """Exact Prokhorov distance between two finitely supported measures.

    For a fixed ``eps`` both defining inequalities hold iff at least
    ``M - eps`` of the mass can be matched along pairs at distance
    ``<= eps`` (``M`` the larger total mass), which is a max-flow question.
    The matched mass is a step function of ``eps`` with steps at pairwise
    distances, so the infimum is ``min_i max(d_i, M - F(d_i))`` over the
    sorted distances ``d_0 = 0 < d_1 < ...``; the minimum is located by
    bisection because the first term increases and the second decreases.

    The result is exact: distances enter as the rationals equal to their
    floating-point values.  ``probability=False`` admits arbitrary finite
    measures.
    """
    _metric_guard(metric)
    if probability and not (mu.is_probability and nu.is_probability):
        raise ValueError("prokhorov expects probability measures (total mass 1)")
    if mu.support.dim != nu.support.dim:
        raise ValueError("measures live in spaces of different dimension")
    D = pairwise_distances(mu.support, nu.support)
    denom = math.lcm(*(w.denominator for w in mu.weights + nu.weights))
    a = np.array([int(w * denom) for w in mu.weights], dtype=object)
    b = np.array([int(w * denom) for w in nu.weights], dtype=object)
    total = max(mu.total_mass, nu.total_mass)

    dists = np.unique(np.concatenate([[0.0], D.ravel()]))
    cache: dict[int, Fraction] = {}

    def deficit(i: int) -> Fraction:
        if i not in cache:
            cache[i] = total - Fraction(_transport_mass(D, a, b, float(dists[i])), denom)
        return cache[i]

    # first index where the distance reaches the unmatched mass
    lo, hi = 0, len(dists)
    while lo < hi:
        mid = (lo + hi) // 2
        if Fraction(float(dists[mid])) >= deficit(mid):
            hi = mid
        else:
            lo = mid + 1
    candidates = [total]
    if lo < len(dists):
        candidates.append(Fraction(float(dists[lo])))
    if lo > 0:
        candidates.append(deficit(lo - 1))
    return max(Fraction(0), min(candidates))


def _round_down(x: Fraction) -> float:
    f = float(x)
    if Fraction(f) > x:
        f = float(np.nextafter(f, -np.inf))
    return f


def _subsets(n: int, max_size: int) -> list[tuple[int, ...]]:
    return [s for k in range(1, max_size + 1) for s in itertools.combinations(range(n), k)]


class _Membership:
    """Exact membership test for the measure Dowker bifiltration of a cloud."""

    def __init__(self, X: PointCloud, mu: EmpiricalMeasure, max_size: int):
        self.simplices = _subsets(len(X), max_size)
        self.index = {s: i for i, s in enumerate(self.simplices)}
        D = pairwise_distances(X, mu.support)
        rows = [D[list(s)].max(axis=0) for s in self.simplices]
        self.witness = np.array(rows).reshape(len(self.simplices), len(mu))
        self.ints, self.denom = mu.integer_weights()

    def members(self, m: Fraction, r: Fraction) -> np.ndarray:
        """Simplices with witness mass >= m inside closed balls of radius 2r."""
        need = m * self.denom
        if need <= 0:
            return np.ones(len(self.simplices), dtype=bool)
        mass = (self.witness <= _round_down(2 * r)).astype(np.int64) @ self.ints
        return mass >= math.ceil(need)


@dataclass
class StabilityReport:
    passed: bool
    delta: Fraction
    bound: Fraction
    checked: int
    counterexample: tuple | None = None

    def to_text(self) -> str:
        head = f"delta={float(self.delta):.17g} bound={float(self.bound):.17g} checked={self.checked}"
        if self.passed:
            return head + " PASS\n"
        return head + f" FAIL at {self.counterexample}\n"


def _one_direction(X1, mu1, X2, mu2, delta: Fraction, grid, max_size: int, label: str):
    A = _Membership(X1, mu1, max_size)
    B = _Membership(X2, mu2, max_size)
    close = pairwise_distances(X1, X2) <= float(delta)
    idx, seg = [], []
    for s in A.simplices:
        partners = np.flatnonzero(close[list(s)].any(axis=0)).tolist()
        seg.append(len(idx))
        idx.extend(B.index[t] for k in range(1, max_size + 1)
                   for t in itertools.combinations(partners, k))
    idx = np.array(idx, dtype=np.int64)
    seg = np.array(seg, dtype=np.int64)
    checked = 0
    for m in grid[0]:
        for r in grid[1]:
            m_f, r_f = Fraction(m), Fraction(r)
            in_a = A.members(m_f, r_f)
            in_b = B.members(m_f - delta, r_f + delta)
            ok = np.logical_and.reduceat(in_b[idx], seg)
            bad = np.flatnonzero(in_a & ~ok)
            checked += int(in_a.sum())
            if len(bad):
                sigma = A.simplices[bad[0]]
                lo = seg[bad[0]]
                hi = seg[bad[0] + 1] if bad[0] + 1 < len(seg) else len(idx)
                tau = next(B.simplices[t] for t in idx[lo:hi] if not in_b[t])
                return checked, (label, m, r, sigma, tau)
    return checked, None


def check_stability_lemma(X1, mu1: EmpiricalMeasure, X2, mu2: EmpiricalMeasure,
                          params: BuildParams, delta, grid) -> StabilityReport:
    """Check the correspondence interleaving on a grid of bidegrees.

    For every grid point ``(m, r)`` and simplex ``sigma`` of dimension at
    most ``params.dim_max`` present in the measure Dowker bifiltration of
    ``(X1, mu1)`` at ``(m, r)``, every subset (same dimension bound) of the
    points of ``X2`` within ``delta`` of ``sigma`` must be present in that of
    ``(X2, mu2)`` at ``(m - delta, r + delta)``; and symmetrically.  Radii
    follow the ``d <= 2r`` convention.

    Raises :class:`PreconditionError` when ``delta`` is below
    ``max(hausdorff, prokhorov)``.
    """
    X1 = X1 if isinstance(X1, PointCloud) else PointCloud(X1)
    X2 = X2 if isinstance(X2, PointCloud) else PointCloud(X2)
    delta = Fraction(delta)
    bound = max(Fraction(hausdorff(X1, X2)), prokhorov(mu1, mu2, probability=False))
    if delta < bound:
        raise PreconditionError(f"delta={float(delta)} is below max(d_H, d_Pr)={float(bound)}")
    size = params.dim_max + 1
    grid = (list(grid[0]), list(grid[1]))
    checked, bad = _one_direction(X1, mu1, X2, mu2, delta, grid, size, "1->2")
    if bad is None:
        more, bad = _one_direction(X2, mu2, X1, mu1, delta, grid, size, "2->1")
        checked += more
    return StabilityReport(bad is None, delta, bound, checked, bad)
