"""Simplicial homology over Z/2 and Hilbert functions of bifiltered complexes.

Matrices over Z/2 are bit-packed into Python integers (one integer per
column, bit ``i`` = row ``i``), so column additions are single XORs.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .core import BifilteredComplex, HilbertGrid, SimplicialComplex, faces

__all__ = [
    "betti_numbers",
    "boundary_columns",
    "euler_characteristic",
    "gf2_rank",
    "hilbert_grid",
]


def gf2_rank(columns: Sequence[int]) -> int:
    """Rank over Z/2 of a matrix given as bit-packed columns."""
    pivots: dict[int, int] = {}
    rank = 0
    for col in columns:
        while col:
            low = col.bit_length() - 1
            other = pivots.get(low)
            if other is None:
                pivots[low] = col
                rank += 1
                break
            col ^= other
    return rank


def boundary_columns(K: SimplicialComplex, k: int) -> list[int]:
    """Columns of the boundary map from k-simplices to (k-1)-simplices.

    Rows follow the sorted order of the (k-1)-simplices.
    """
    if k <= 0:
        return []
    rows = {s: i for i, s in enumerate(K.skeleton(k - 1))}
    cols = []
    for s in K.skeleton(k):
        col = 0
        for f in faces(s):
            col |= 1 << rows[f]
        cols.append(col)
    return cols


def betti_numbers(K: SimplicialComplex, max_degree: int) -> list[int]:
    """Z/2 Betti numbers ``b_0..b_max_degree``; all zero for the empty complex."""
    if not isinstance(K, SimplicialComplex):
        K = SimplicialComplex(K)
    counts = [len(K.skeleton(k)) for k in range(max_degree + 2)]
    ranks = [0] + [gf2_rank(boundary_columns(K, k)) for k in range(1, max_degree + 2)]
    return [counts[k] - ranks[k] - ranks[k + 1] for k in range(max_degree + 1)]


def euler_characteristic(K: SimplicialComplex) -> int:
    return sum((-1) ** k * c for k, c in enumerate(K.f_vector()))


class _Structure:
    """Facet/coface incidences of a bifiltered complex, computed once."""

    def __init__(self, C: BifilteredComplex):
        self.dims = C.dims()
        index = {s: i for i, s in enumerate(C.simplices)}
        top = int(self.dims.max()) if len(C) else -1
        self.facets = {}
        for k in range(1, top + 1):
            ids = np.flatnonzero(self.dims == k)
            fac = np.array([[index[f] for f in faces(C.simplices[i])] for i in ids], dtype=np.int64)
            self.facets[k] = (ids, fac.reshape(len(ids), k + 1))
        self.n = len(C)

    def cofaces(self, k: int):
        """CSR lists ``(offsets, coface ids)`` indexed by global simplex id."""
        if k + 1 not in self.facets:
            return np.zeros(self.n + 1, dtype=np.int64), np.zeros(0, dtype=np.int64)
        ids, fac = self.facets[k + 1]
        owner = np.repeat(ids, fac.shape[1])
        flat = fac.ravel()
        order = np.argsort(flat, kind="stable")
        counts = np.bincount(flat, minlength=self.n)
        offsets = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(counts, out=offsets[1:])
        return offsets, owner[order]


def _filtration_rank(values: np.ndarray, ids: np.ndarray) -> np.ndarray:
    """Position of each id in the order (value, id) restricted to ``ids``."""
    order = ids[np.lexsort((ids, values[ids]))]
    pos = np.full(len(values), -1, dtype=np.int64)
    pos[order] = np.arange(len(order))
    return pos


def _zero_dim(values, st: _Structure):
    """Birth values of vertices and ids of the edges that merge components."""
    alive = np.isfinite(values)
    verts = np.flatnonzero(alive & (st.dims == 0))
    deaths = []
    if 1 in st.facets:
        ids, fac = st.facets[1]
        mask = alive[ids]
        ids, fac = ids[mask], fac[mask]
        order = np.lexsort((ids, values[ids]))
        parent = {int(v): int(v) for v in verts}

        def find(x):
            root = x
            while parent[root] != root:
                root = parent[root]
            while parent[x] != root:
                parent[x], x = root, parent[x]
            return root

        for e, (a, b) in zip(ids[order].tolist(), fac[order].tolist()):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
                deaths.append(e)
    return verts, np.array(deaths, dtype=np.int64)


def _cohomology(values, st: _Structure, k: int, cleared: np.ndarray, cofaces):
    """Persistent cohomology in degree ``k >= 1`` with clearing.

    Returns ``(positive k-simplex ids, negative (k+1)-simplex ids)``; Betti
    numbers follow by counting the ones present at each radius.
    """
    alive = np.isfinite(values)
    dims = st.dims
    ksimp = np.flatnonzero(alive & (dims == k))
    skip = np.zeros(st.n, dtype=bool)
    skip[cleared] = True
    columns = ksimp[~skip[ksimp]]
    if k + 1 not in st.facets:
        return columns, np.zeros(0, dtype=np.int64)

    up_ids, up_fac = st.facets[k + 1]
    up_mask = alive[up_ids]
    up_ids, up_fac = up_ids[up_mask], up_fac[up_mask]
    if len(up_ids) == 0:
        return columns, np.zeros(0, dtype=np.int64)
    pos_up = _filtration_rank(values, up_ids)
    pos_k = _filtration_rank(values, ksimp)

    # apparent pairs: the earliest coface of sigma whose latest facet is sigma
    earliest = np.full(st.n, np.iinfo(np.int64).max)
    np.minimum.at(earliest, up_fac.ravel(), np.repeat(pos_up[up_ids], k + 2))
    latest = up_fac[np.arange(len(up_ids)), np.argmax(pos_k[up_fac], axis=1)]
    by_pos = np.empty(len(up_ids), dtype=np.int64)
    by_pos[pos_up[up_ids]] = up_ids
    latest_of_pos = np.empty(len(up_ids), dtype=np.int64)
    latest_of_pos[pos_up[up_ids]] = latest

    offs, co = cofaces

    nbytes = (len(up_ids) + 7) // 8
    bit = (1 << np.arange(8)).astype(np.uint8)

    def coboundary(s: int) -> int:
        p = pos_up[co[offs[s]:offs[s + 1]]]
        p = p[p >= 0]
        if len(p) == 0:
            return 0
        buf = np.zeros(nbytes, dtype=np.uint8)
        np.bitwise_or.at(buf, p >> 3, bit[p & 7])
        return int.from_bytes(buf.tobytes(), "little")

    pivot_col: dict[int, object] = {}
    deaths = []
    for s in columns[np.argsort(-pos_k[columns], kind="stable")].tolist():
        e = earliest[s]
        if e < len(up_ids) and latest_of_pos[e] == s:
            pivot_col[int(e)] = _Lazy(coboundary, s)
            deaths.append(int(by_pos[e]))
            continue
        col = coboundary(s)
        while col:
            low = (col & -col).bit_length() - 1
            other = pivot_col.get(low)
            if other is None:
                pivot_col[low] = col
                deaths.append(int(by_pos[low]))
                break
            if isinstance(other, _Lazy):
                other = other.get()
            col ^= other
    return columns, np.array(deaths, dtype=np.int64)


class _Lazy:
    __slots__ = ("fn", "arg", "val")

    def __init__(self, fn, arg):
        self.fn, self.arg, self.val = fn, arg, None

    def get(self):
        if self.val is None:
            self.val = self.fn(self.arg)
        return self.val


def _betti_curves(C: BifilteredComplex, st: _Structure, cofaces, m: float, r_values, degree: int):
    values = C.entry_radii(m)
    verts, deaths = _zero_dim(values, st)
    positives = verts
    for k in range(1, degree + 1):
        positives, deaths = _cohomology(values, st, k, deaths, cofaces[k])
    born = np.sort(values[positives])
    died = np.sort(values[deaths])
    r = np.asarray(r_values, dtype=np.float64)
    return np.searchsorted(born, r, side="right") - np.searchsorted(died, r, side="right")


def hilbert_grid(C: BifilteredComplex, m_values, r_values, degree: int,
                 method: str = "persistence") -> HilbertGrid:
    """Betti numbers in one homology degree on an ``(m, r)`` grid.

    ``method="slices"`` recomputes the homology of every slice from scratch;
    ``method="persistence"`` (default) reduces the one-parameter filtration
    at each ``m`` once and reads off all radii from its barcode.  Both give
    identical grids.
    """
    if degree < 0:
        raise ValueError("homology degree must be non-negative")
    m_values = tuple(m_values)
    r_values = tuple(r_values)
    for name, grid in (("m", m_values), ("r", r_values)):
        if any(a > b for a, b in zip(grid, grid[1:])):
            raise ValueError(f"{name} grid must be ascending")
    betti = np.zeros((len(m_values), len(r_values)), dtype=np.int64)
    if method == "slices":
        from .bifiltration import slice_complex

        for i, m in enumerate(m_values):
            for j, r in enumerate(r_values):
                betti[i, j] = betti_numbers(slice_complex(C, m, r), degree)[degree]
    elif method == "persistence":
        if len(C):
            st = _Structure(C)
            cofaces = {k: st.cofaces(k) for k in range(1, degree + 1)}
            for i, m in enumerate(m_values):
                betti[i] = _betti_curves(C, st, cofaces, m, r_values, degree)
    else:
        raise ValueError(f"unknown method {method!r}")
    return HilbertGrid(m_values, r_values, betti, degree)
