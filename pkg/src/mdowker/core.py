"""Shared domain types for bifiltered Dowker complexes.

Vertices are integer indices into a fixed, ordered vertex set.  The weight
axis ``m`` is always stored as a positive number; the reversed order of that
axis lives in :func:`poset_leq` and nowhere else.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

__all__ = [
    "NO_RELATION",
    "Bidegree",
    "BifilteredComplex",
    "EmpiricalMeasure",
    "GuardError",
    "HilbertGrid",
    "LambdaMatrix",
    "PointCloud",
    "SimplicialComplex",
    "poset_leq",
]

# Entry of an indicator-style lambda matrix meaning "never related".
NO_RELATION = float(np.finfo(np.float64).max)


class GuardError(ValueError):
    """An input exceeds the size limits of an exhaustive construction."""


class Bidegree(NamedTuple):
    m: float
    r: float


def poset_leq(a: Bidegree, b: Bidegree) -> bool:
    """Product order in which the bifiltration grows.

    ``a <= b`` iff ``a.m >= b.m`` and ``a.r <= b.r``: a complex indexed by
    ``a`` is a subcomplex of the one indexed by ``b``.
    """
    return a[0] >= b[0] and a[1] <= b[1]


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


class PointCloud:
    """A finite, ordered set of points in R^d stored as an ``(n, d)`` array."""

    __slots__ = ("_points",)

    def __init__(self, points, dim: int | None = None):
        arr = np.array(points, dtype=np.float64)
        if arr.size == 0:
            arr = arr.reshape(0, dim if dim is not None else (arr.shape[-1] if arr.ndim == 2 else 1))
        elif arr.ndim == 1:
            # a bare list of reals is a cloud on the line
            arr = arr.reshape(-1, 1)
        if arr.ndim != 2 or arr.shape[1] < 1:
            raise ValueError(f"points must form an (n, d) array with d >= 1, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("point coordinates must be finite")
        self._points = _frozen(arr)

    @property
    def points(self) -> np.ndarray:
        return self._points

    @property
    def dim(self) -> int:
        return self._points.shape[1]

    def __len__(self) -> int:
        return self._points.shape[0]

    def __getitem__(self, i):
        return self._points[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, PointCloud) and np.array_equal(self._points, other._points)

    def __hash__(self):
        return hash(self._points.tobytes())

    def __repr__(self) -> str:
        return f"PointCloud(n={len(self)}, d={self.dim})"


class LambdaMatrix:
    """Real matrix filtering the relation between vertices (rows) and witnesses (columns).

    The relation at scale ``r`` is the sublevel set ``{values <= r}``.
    """

    __slots__ = ("_values",)

    def __init__(self, values):
        arr = np.array(values, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"lambda matrix must be 2-d and non-empty, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("lambda matrix entries must be finite (use NO_RELATION for 'never')")
        self._values = _frozen(arr)

    @classmethod
    def from_indicator(cls, relation) -> "LambdaMatrix":
        """0 where related, :data:`NO_RELATION` elsewhere; filter at ``r = 0``."""
        rel = np.asarray(relation, dtype=bool)
        return cls(np.where(rel, 0.0, NO_RELATION))

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def shape(self) -> tuple[int, int]:
        return self._values.shape

    @property
    def row_count(self) -> int:
        return self._values.shape[0]

    @property
    def col_count(self) -> int:
        return self._values.shape[1]

    def relation(self, r: float) -> np.ndarray:
        return self._values <= r

    def __eq__(self, other) -> bool:
        return isinstance(other, LambdaMatrix) and np.array_equal(self._values, other._values)

    def __repr__(self) -> str:
        return f"LambdaMatrix(shape={self.shape})"


def check_simplex(vertices: Sequence[int]) -> tuple[int, ...]:
    s = tuple(int(v) for v in vertices)
    if not s:
        raise ValueError("a simplex needs at least one vertex")
    if any(a >= b for a, b in zip(s, s[1:])):
        raise ValueError(f"simplex vertices must be strictly ascending: {s}")
    if s[0] < 0:
        raise ValueError(f"negative vertex index in {s}")
    return s


def faces(simplex: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """Codimension-one faces, in the order obtained by dropping vertex 0, 1, ..."""
    for i in range(len(simplex)):
        yield simplex[:i] + simplex[i + 1:]


class SimplicialComplex:
    """A face-closed set of simplices (vertex tuples)."""

    __slots__ = ("_simplices",)

    def __init__(self, simplices: Iterable[Sequence[int]] = (), *, close: bool = False, check: bool = True):
        simp = {check_simplex(s) for s in simplices} if check else set(simplices)
        if close:
            simp = {f for s in simp for k in range(1, len(s) + 1)
                    for f in itertools.combinations(s, k)}
        elif check:
            for s in simp:
                if len(s) > 1:
                    for f in faces(s):
                        if f not in simp:
                            raise ValueError(f"not face-closed: {s} present but face {f} missing")
        self._simplices = frozenset(simp)

    @property
    def simplices(self) -> frozenset:
        return self._simplices

    def __iter__(self):
        return iter(self._simplices)

    def __len__(self) -> int:
        return len(self._simplices)

    def __contains__(self, simplex) -> bool:
        return tuple(simplex) in self._simplices

    def __eq__(self, other) -> bool:
        if isinstance(other, SimplicialComplex):
            return self._simplices == other._simplices
        return NotImplemented

    def __hash__(self):
        return hash(self._simplices)

    def __le__(self, other: "SimplicialComplex") -> bool:
        return self._simplices <= other._simplices

    @property
    def dimension(self) -> int:
        return max((len(s) - 1 for s in self._simplices), default=-1)

    def skeleton(self, k: int) -> list[tuple[int, ...]]:
        """Sorted list of the ``k``-simplices."""
        return sorted(s for s in self._simplices if len(s) == k + 1)

    def f_vector(self) -> list[int]:
        counts = [0] * (self.dimension + 1)
        for s in self._simplices:
            counts[len(s) - 1] += 1
        return counts

    def cone(self) -> "SimplicialComplex":
        """Cone with apex one past the largest vertex index."""
        apex = max((s[-1] for s in self._simplices), default=-1) + 1
        coned = set(self._simplices) | {(apex,)}
        coned |= {s + (apex,) for s in self._simplices}
        return SimplicialComplex(coned, check=False)

    def __repr__(self) -> str:
        return f"SimplicialComplex(f={self.f_vector()})"


@dataclass(frozen=True, eq=False)
class BifilteredComplex:
    """Simplices with multi-critical bidegrees of appearance.

    Bidegree lists are stored flat: the pairs of simplex ``i`` are
    ``(weights[j], radii[j])`` for ``offsets[i] <= j < offsets[i + 1]``,
    with ``m`` strictly increasing inside each list.

    ``max_dim``, ``m_max`` and ``r_max`` are build metadata and do not take
    part in equality.
    """

    simplices: tuple
    offsets: np.ndarray
    weights: np.ndarray
    radii: np.ndarray
    max_dim: int = -1
    m_max: float = 0
    r_max: float = math.inf
    _index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        for name in ("offsets", "weights", "radii"):
            _frozen(getattr(self, name))
        if len(self.offsets) != len(self.simplices) + 1:
            raise ValueError("offsets must have one entry more than simplices")
        if np.any(np.diff(self.offsets) <= 0):
            raise ValueError("every simplex needs a non-empty bidegree list")

    @classmethod
    def from_lists(cls, items, *, max_dim=None, m_max=None, r_max=math.inf) -> "BifilteredComplex":
        """Build from ``[(simplex, [(m, r), ...]), ...]``."""
        simplices, offsets, ms, rs = [], [0], [], []
        for simplex, pairs in items:
            simplices.append(check_simplex(simplex))
            pairs = list(pairs)
            if not pairs:
                raise ValueError(f"simplex {simplex} has an empty bidegree list")
            for (m1, _), (m2, _) in zip(pairs, pairs[1:]):
                if not m1 < m2:
                    raise ValueError(f"weights must strictly increase within {simplex}: {pairs}")
            for m, r in pairs:
                ms.append(m)
                rs.append(r)
            offsets.append(len(ms))
        weights = np.array(ms)
        if weights.size == 0 or not np.issubdtype(weights.dtype, np.integer):
            weights = weights.astype(np.float64) if weights.size else np.zeros(0, dtype=np.int64)
        if max_dim is None:
            max_dim = max((len(s) - 1 for s in simplices), default=-1)
        if m_max is None:
            m_max = weights.max() if weights.size else 0
        return cls(tuple(simplices), np.array(offsets, dtype=np.int64), weights,
                   np.array(rs, dtype=np.float64), max_dim, m_max, r_max)

    def __len__(self) -> int:
        return len(self.simplices)

    def bidegrees(self, i: int) -> list[Bidegree]:
        lo, hi = self.offsets[i], self.offsets[i + 1]
        return [Bidegree(m, r) for m, r in zip(self.weights[lo:hi].tolist(), self.radii[lo:hi].tolist())]

    def items(self) -> Iterator[tuple[tuple[int, ...], list[Bidegree]]]:
        for i, s in enumerate(self.simplices):
            yield s, self.bidegrees(i)

    def index(self, simplex) -> int:
        if self._index is None:
            object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.simplices)})
        return self._index[tuple(simplex)]

    def __getitem__(self, simplex) -> list[Bidegree]:
        return self.bidegrees(self.index(simplex))

    def __contains__(self, simplex) -> bool:
        try:
            self.index(simplex)
        except KeyError:
            return False
        return True

    def dims(self) -> np.ndarray:
        return np.fromiter((len(s) - 1 for s in self.simplices), dtype=np.int64, count=len(self.simplices))

    def entry_radii(self, m: float) -> np.ndarray:
        """Smallest ``r`` at which each simplex is present at weight ``m`` (inf if never)."""
        if not self.simplices:
            return np.zeros(0)
        vals = np.where(self.weights >= m, self.radii, np.inf)
        return np.minimum.reduceat(vals, self.offsets[:-1])

    def as_dict(self) -> dict:
        return {s: [tuple(b) for b in bs] for s, bs in self.items()}

    def __eq__(self, other) -> bool:
        if not isinstance(other, BifilteredComplex):
            return NotImplemented
        return (self.simplices == other.simplices
                and np.array_equal(self.offsets, other.offsets)
                and np.array_equal(self.weights, other.weights)
                and np.array_equal(self.radii, other.radii))

    def __repr__(self) -> str:
        return f"BifilteredComplex(simplices={len(self)}, max_dim={self.max_dim}, m_max={self.m_max})"


class EmpiricalMeasure:
    """Finitely many weighted point masses with exact rational weights."""

    __slots__ = ("support", "weights", "total_mass")

    def __init__(self, support: PointCloud, weights: Iterable):
        if not isinstance(support, PointCloud):
            support = PointCloud(support)
        w = tuple(Fraction(x) for x in weights)
        if len(w) != len(support):
            raise ValueError(f"{len(w)} weights for {len(support)} support points")
        if any(x <= 0 for x in w):
            raise ValueError("weights must be positive")
        self.support = support
        self.weights = w
        self.total_mass = sum(w, Fraction(0))

    @classmethod
    def counting(cls, support) -> "EmpiricalMeasure":
        support = support if isinstance(support, PointCloud) else PointCloud(support)
        return cls(support, [1] * len(support))

    @classmethod
    def probability(cls, support) -> "EmpiricalMeasure":
        support = support if isinstance(support, PointCloud) else PointCloud(support)
        n = len(support)
        return cls(support, [Fraction(1, n)] * n)

    @property
    def is_probability(self) -> bool:
        return self.total_mass == 1

    def integer_weights(self) -> tuple[np.ndarray, int]:
        """Weights scaled by their common denominator ``D``: returns ``(ints, D)``."""
        denom = math.lcm(*(x.denominator for x in self.weights)) if self.weights else 1
        ints = np.array([int(x * denom) for x in self.weights], dtype=np.int64)
        return ints, denom

    def __len__(self) -> int:
        return len(self.weights)

    def __repr__(self) -> str:
        return f"EmpiricalMeasure(n={len(self)}, total_mass={self.total_mass})"


@dataclass(frozen=True, eq=False)
class HilbertGrid:
    """Betti numbers sampled on an ``(m, r)`` grid; rows follow ``m_values``."""

    m_values: tuple
    r_values: tuple
    betti: np.ndarray
    homology_degree: int

    def __post_init__(self):
        b = np.asarray(self.betti, dtype=np.int64)
        if b.shape != (len(self.m_values), len(self.r_values)):
            raise ValueError(f"betti shape {b.shape} does not match the grid")
        object.__setattr__(self, "betti", _frozen(b))

    def at(self, m, r) -> int:
        return int(self.betti[list(self.m_values).index(m), list(self.r_values).index(r)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, HilbertGrid):
            return NotImplemented
        return (tuple(self.m_values) == tuple(other.m_values)
                and tuple(self.r_values) == tuple(other.r_values)
                and self.homology_degree == other.homology_degree
                and np.array_equal(self.betti, other.betti))
