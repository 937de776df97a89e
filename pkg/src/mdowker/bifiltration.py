"""Construction of bifiltered measure Dowker complexes.

A simplex ``sigma`` of the measure Dowker bifiltration built from a lambda
matrix ``L`` (rows = vertices, columns = witnesses with counting measure) is
present at ``(m, r)`` when at least ``m`` witnesses ``y`` satisfy
``L[x, y] <= 2 r`` for every vertex ``x`` of ``sigma``.  Its bidegrees of
appearance are ``(m, r_m)`` where ``r_m`` is the m-th smallest entry of the
witness vector ``max_{x in sigma} L[x, :] / 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    NO_RELATION,
    Bidegree,
    BifilteredComplex,
    EmpiricalMeasure,
    LambdaMatrix,
    PointCloud,
    SimplicialComplex,
)
from .relations import pairwise_distances

__all__ = [
    "BuildParams",
    "bidegrees",
    "build_degree_rips",
    "build_measure_dowker",
    "minimize_bidegrees",
    "slice_complex",
    "witness_vector",
]


@dataclass(frozen=True)
class BuildParams:
    """Truncation parameters shared by the constructions.

    ``halve_radii`` applies the ``L <= 2r`` convention; turn it off to keep
    both axes on the scale of the lambda values (e.g. nearest-neighbour
    ranks).
    """

    m_max: int = 1
    dim_max: int = 0
    r_max: float = math.inf
    halve_radii: bool = True

    def __post_init__(self):
        if int(self.m_max) != self.m_max or self.m_max < 1:
            raise ValueError(f"m_max must be a positive integer, got {self.m_max}")
        if int(self.dim_max) != self.dim_max or self.dim_max < 0:
            raise ValueError(f"dim_max must be a non-negative integer, got {self.dim_max}")
        if not self.r_max > 0:
            raise ValueError(f"r_max must be positive, got {self.r_max}")


def _finite_values(values: np.ndarray) -> np.ndarray:
    # entries at the NO_RELATION sentinel never enter the relation
    return np.where(values >= NO_RELATION, np.inf, values)


def bidegrees(witness_values, params: BuildParams) -> list[Bidegree]:
    """Bidegrees of appearance from the per-witness values of one simplex.

    ``witness_values[y]`` is the max over the simplex's vertices of ``L[x, y]``.
    Returns ``(m, r_m)`` for ``m = 1..m_max`` with ``r_m <= r_max``.
    """
    w = _finite_values(np.asarray(witness_values, dtype=np.float64).ravel())
    k = min(params.m_max, w.size)
    if k == 0:
        return []
    if k < w.size:
        w = np.partition(w, k - 1)[:k]
    r = np.sort(w)[:k]
    if params.halve_radii:
        r = r / 2
    keep = np.isfinite(r) & (r <= params.r_max)
    count = int(keep.sum())
    return [Bidegree(m + 1, float(r[m])) for m in range(count)]


def witness_vector(L: LambdaMatrix, simplex) -> np.ndarray:
    """Entrywise maximum of the rows of ``L`` indexed by the simplex's vertices."""
    return L.values[list(simplex)].max(axis=0)


def build_measure_dowker(L: LambdaMatrix, params: BuildParams) -> BifilteredComplex:
    """Bifiltered measure Dowker complex of a lambda matrix.

    Depth-first enumeration: starting vertices ``k = n-1, ..., 0``; each
    simplex is followed by its cofaces ``sigma + (j,)`` for ``j > max(sigma)``
    in ascending order.  The witness vector of a coface is the entrywise max
    of the parent's vector and row ``j``.  A simplex without any bidegree
    below ``r_max`` is dropped together with all of its cofaces.
    """
    values = _finite_values(L.values)
    n, ny = values.shape
    k = min(params.m_max, ny)
    scale = 0.5 if params.halve_radii else 1.0
    r_max = params.r_max
    dim_max = params.dim_max

    simplices: list[tuple[int, ...]] = []
    rows: list[np.ndarray] = []

    def smallest(W: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        # k smallest per row, sorted, scaled; plus the count that survives r_max
        if k < ny:
            W = np.partition(W, k - 1, axis=1)[:, :k]
        R = np.sort(W, axis=1) * scale
        counts = np.count_nonzero(np.isfinite(R) & (R <= r_max), axis=1)
        return R, counts

    def visit(sigma: tuple[int, ...], w: np.ndarray, radii: np.ndarray) -> None:
        simplices.append(sigma)
        rows.append(radii)
        top = sigma[-1]
        if len(sigma) > dim_max or top == n - 1:
            return
        children = np.maximum(w, values[top + 1:])
        R, counts = smallest(children)
        for idx in np.flatnonzero(counts):
            visit(sigma + (top + 1 + int(idx),), children[idx], R[idx, :counts[idx]])

    R0, counts0 = smallest(values)
    for v in range(n - 1, -1, -1):
        if counts0[v]:
            visit((v,), values[v], R0[v, :counts0[v]])

    lengths = np.fromiter((len(r) for r in rows), dtype=np.int64, count=len(rows))
    offsets = np.zeros(len(rows) + 1, dtype=np.int64)
    np.cumsum(lengths, out=offsets[1:])
    radii = np.concatenate(rows) if rows else np.zeros(0)
    weights = np.concatenate([np.arange(1, c + 1) for c in lengths]) if rows else np.zeros(0, dtype=np.int64)
    return BifilteredComplex(tuple(simplices), offsets, weights.astype(np.int64), radii,
                             dim_max, params.m_max, r_max)


def slice_complex(C: BifilteredComplex, m: float, r: float) -> SimplicialComplex:
    """The complex at bidegree ``(m, r)``: simplices with some ``(m', r')``, ``m' >= m``, ``r' <= r``."""
    if not len(C):
        return SimplicialComplex()
    present = C.entry_radii(m) <= r
    return SimplicialComplex((C.simplices[i] for i in np.flatnonzero(present)), check=False)


def minimize_bidegrees(C: BifilteredComplex) -> BifilteredComplex:
    """Drop every bidegree dominated by the next one in its list.

    ``(m, r)`` is redundant when the following pair ``(m', r')`` has
    ``r' <= r``; slices are unchanged.
    """
    n = len(C.radii)
    if n == 0:
        return C
    keep = np.ones(n, dtype=bool)
    nxt = np.arange(n - 1)
    dominated = C.radii[nxt + 1] <= C.radii[nxt]
    last = np.zeros(n, dtype=bool)
    last[C.offsets[1:] - 1] = True
    keep[:-1] = ~(dominated & ~last[:-1])
    counts = np.add.reduceat(keep.astype(np.int64), C.offsets[:-1])
    offsets = np.zeros(len(C) + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    return BifilteredComplex(C.simplices, offsets, C.weights[keep], C.radii[keep],
                             C.max_dim, C.m_max, C.r_max)


def _ball_radii(X: PointCloud, mu: EmpiricalMeasure, m_max: int) -> np.ndarray:
    """``rho[x, m-1]``: smallest r with ``mu(closed ball(x, r)) >= m`` (inf if never)."""
    D = pairwise_distances(X, mu.support)
    ints, denom = mu.integer_weights()
    order = np.argsort(D, axis=1, kind="stable")
    sorted_d = np.take_along_axis(D, order, axis=1)
    cum = np.cumsum(ints[order], axis=1)
    rho = np.full((len(X), m_max), np.inf)
    for m in range(1, m_max + 1):
        reached = cum >= m * denom
        hit = reached.any(axis=1)
        first = reached.argmax(axis=1)
        rho[hit, m - 1] = sorted_d[hit, first[hit]]
    return rho


def build_degree_rips(X, mu: EmpiricalMeasure, params: BuildParams) -> BifilteredComplex:
    """Degree-Rips bifiltration: Rips complex at scale r on the vertices whose
    closed r-ball carries mass at least m.

    For integer weights ``m = 1..m_max`` a simplex enters at
    ``max(diameter, max_x rho_m(x))``.  Radii are not halved.
    """
    X = X if isinstance(X, PointCloud) else PointCloud(X)
    if mu.support.dim != X.dim:
        raise ValueError("measure support and point cloud live in different dimensions")
    on_x = pairwise_distances(mu.support, X).min(axis=1) == 0
    if not np.all(on_x):
        raise ValueError("measure must be supported on the point cloud")
    n = len(X)
    D = pairwise_distances(X, X)
    rho = _ball_radii(X, mu, params.m_max)
    r_max, dim_max = params.r_max, params.dim_max

    simplices, rows = [], []

    def emit(sigma, rad):
        finite = np.isfinite(rad) & (rad <= r_max)
        count = int(np.argmin(finite)) if not finite.all() else len(rad)
        if count:
            simplices.append(sigma)
            rows.append(rad[:count])
        return count

    def visit(sigma, diam, vertex_rho):
        rad = np.maximum(diam, vertex_rho)
        if not emit(sigma, rad) or len(sigma) > dim_max:
            return
        for j in range(sigma[-1] + 1, n):
            d = max(diam, float(D[list(sigma), j].max()))
            visit(sigma + (j,), d, np.maximum(vertex_rho, rho[j]))

    for v in range(n - 1, -1, -1):
        visit((v,), 0.0, rho[v])

    lengths = [len(r) for r in rows]
    offsets = np.zeros(len(rows) + 1, dtype=np.int64)
    np.cumsum(lengths, out=offsets[1:])
    radii = np.concatenate(rows) if rows else np.zeros(0)
    weights = np.concatenate([np.arange(1, c + 1) for c in lengths]) if rows else np.zeros(0, dtype=np.int64)
    return BifilteredComplex(tuple(simplices), offsets, weights.astype(np.int64), radii,
                             dim_max, params.m_max, r_max)
