"""Constructors for lambda matrices (filtered relations)."""

from __future__ import annotations

import numpy as np
from scipy.spatial.distance import cdist

from .core import LambdaMatrix, PointCloud

__all__ = [
    "distance_lambda",
    "grid_landmarks",
    "knn_rank_lambda",
    "make_rng",
    "random_uniform_lambda",
    "transpose_lambda",
]

METRICS = ("euclidean", "cosine")


def make_rng(seed) -> np.random.Generator:
    """Seeded generator used by every sampler in the package: numpy's PCG64."""
    return np.random.Generator(np.random.PCG64(seed))


def _as_cloud(x) -> PointCloud:
    return x if isinstance(x, PointCloud) else PointCloud(x)


def pairwise_distances(X, Y, metric: str = "euclidean") -> np.ndarray:
    X, Y = _as_cloud(X), _as_cloud(Y)
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}; expected one of {METRICS}")
    if len(X) == 0 or len(Y) == 0:
        raise ValueError("point clouds must be non-empty")
    if X.dim != Y.dim:
        raise ValueError(f"dimension mismatch: {X.dim} vs {Y.dim}")
    if metric == "euclidean":
        return cdist(X.points, Y.points)
    nx = np.linalg.norm(X.points, axis=1)
    ny = np.linalg.norm(Y.points, axis=1)
    if np.any(nx == 0) or np.any(ny == 0):
        raise ValueError("cosine distance is undefined for zero vectors")
    return 1.0 - (X.points @ Y.points.T) / np.outer(nx, ny)


def distance_lambda(X, Y, metric: str = "euclidean") -> LambdaMatrix:
    """``values[i, j] = d(X[i], Y[j])``.

    Cosine distance is ``1 - <x, y> / (|x| |y|)``; it is not a metric, which
    is fine for building a bifiltration but not for the stability checks.
    """
    return LambdaMatrix(pairwise_distances(X, Y, metric))


def knn_rank_lambda(X, metric: str = "euclidean") -> LambdaMatrix:
    """Nearest-neighbour ranks: ``values[i, j] = k`` iff ``j`` is the k-th neighbour of ``i``.

    Each point is its own 0-th neighbour; equal distances are ranked by
    ascending index, so every row is a permutation of ``0..n-1``.
    """
    D = pairwise_distances(X, X, metric)
    n = D.shape[0]
    np.fill_diagonal(D, -np.inf)
    order = np.argsort(D, axis=1, kind="stable")
    ranks = np.empty((n, n), dtype=np.float64)
    rows = np.arange(n)[:, None]
    ranks[rows, order] = np.arange(n, dtype=np.float64)[None, :]
    return LambdaMatrix(ranks)


def random_uniform_lambda(rows: int, cols: int, seed) -> LambdaMatrix:
    """I.i.d. Uniform[0, 1) entries drawn from PCG64 seeded with ``seed``."""
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be positive")
    return LambdaMatrix(make_rng(seed).random((rows, cols)))


def transpose_lambda(L: LambdaMatrix) -> LambdaMatrix:
    return LambdaMatrix(L.values.T)


def grid_landmarks(k: int, bounds=(0.0, 1.0)) -> PointCloud:
    """``k x k`` equispaced grid covering a box, corners included.

    ``bounds`` is either ``(lo, hi)`` for a square or ``((x0, x1), (y0, y1))``.
    Points are listed with the x coordinate varying slowest.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    b = np.asarray(bounds, dtype=np.float64)
    if b.shape == (2,):
        b = np.vstack([b, b])
    if b.shape != (2, 2):
        raise ValueError(f"bad bounds {bounds!r}")
    if np.any(b[:, 1] <= b[:, 0]):
        raise ValueError("degenerate box: zero or negative extent")
    xs = np.linspace(b[0, 0], b[0, 1], k)
    ys = np.linspace(b[1, 0], b[1, 1], k)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    return PointCloud(np.column_stack([gx.ravel(), gy.ravel()]))
