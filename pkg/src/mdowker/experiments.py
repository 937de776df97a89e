"""Samplers and drivers for the annulus and random-matrix examples."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .bifiltration import BuildParams, build_measure_dowker
from .core import HilbertGrid, PointCloud
from .homology import hilbert_grid
from .relations import distance_lambda, grid_landmarks, make_rng, random_uniform_lambda

__all__ = [
    "AnnulusParams",
    "AnnulusResult",
    "ERResult",
    "run_annulus_experiment",
    "run_er_experiment",
    "sample_annulus_mixture",
]


def _uniform_disk_radii(rng: np.random.Generator, count: int, lo: float, hi: float) -> np.ndarray:
    # uniform by area: r^2 is uniform on [lo^2, hi^2]
    return np.sqrt(rng.uniform(lo * lo, hi * hi, size=count))


def sample_annulus_mixture(n: int, inner: float, outer: float, noise_fraction: float, seed,
                           noise_radius: float | None = None) -> PointCloud:
    """Points uniform by area on an annulus, mixed with uniform points on a disk.

    ``ceil(noise_fraction * n)`` points are drawn from the disk of radius
    ``noise_radius`` (default: ``inner`` if positive, else ``outer``); the
    rest lie on the annulus ``inner <= |x| <= outer``.  Annulus points come
    first in the output.
    """
    if n < 0 or int(n) != n:
        raise ValueError(f"n must be a non-negative integer, got {n}")
    if not (0 <= inner < outer):
        raise ValueError(f"need 0 <= inner < outer, got inner={inner}, outer={outer}")
    if not (0 <= noise_fraction <= 1):
        raise ValueError(f"noise_fraction must lie in [0, 1], got {noise_fraction}")
    if noise_radius is None:
        noise_radius = inner if inner > 0 else outer
    if noise_radius <= 0:
        raise ValueError("noise_radius must be positive")
    rng = make_rng(seed)
    noise = math.ceil(round(noise_fraction * n, 9))
    ring = n - noise
    radii = np.concatenate([_uniform_disk_radii(rng, ring, inner, outer),
                            _uniform_disk_radii(rng, noise, 0.0, noise_radius)])
    theta = rng.uniform(0.0, 2 * np.pi, size=n)
    return PointCloud(np.column_stack([radii * np.cos(theta), radii * np.sin(theta)]), dim=2)


@dataclass(frozen=True)
class AnnulusParams:
    n: int = 256
    inner: float = 0.4
    outer: float = 0.5
    noise_fraction: float = 0.05
    landmarks_per_side: int = 10
    landmark_bounds: tuple = (-0.5, 0.5)
    m_max: int = 50
    dim_max: int = 2
    m_values: tuple = tuple(range(1, 51))
    r_values: tuple = tuple(np.linspace(0.0, 0.5, 50).tolist())
    degree: int = 1
    seed: int = 0


@dataclass
class AnnulusResult:
    grids: dict
    timings: dict
    clouds: dict

    def timing_rows(self) -> list[tuple[str, float, float]]:
        """``(cloud, build seconds, homology seconds)`` per cloud."""
        return [(name, t["build"], t["homology"]) for name, t in self.timings.items()]


def run_annulus_experiment(params: AnnulusParams = AnnulusParams()) -> AnnulusResult:
    """Landmark bifiltrations of three clouds and their Hilbert grids.

    Cloud ``X`` is a clean annulus, ``Y`` the annulus with disk noise and
    ``Z`` a uniform disk of radius ``outer``; seeds ``seed``, ``seed + 1``,
    ``seed + 2``.  Landmarks form the vertex set, cloud points the witnesses
    (counting measure).
    """
    p = params
    clouds = {
        "X": sample_annulus_mixture(p.n, p.inner, p.outer, 0.0, p.seed),
        "Y": sample_annulus_mixture(p.n, p.inner, p.outer, p.noise_fraction, p.seed + 1),
        "Z": sample_annulus_mixture(p.n, 0.0, p.outer, 1.0, p.seed + 2),
    }
    S = grid_landmarks(p.landmarks_per_side, p.landmark_bounds)
    build = BuildParams(m_max=p.m_max, dim_max=p.dim_max, r_max=max(p.r_values) if max(p.r_values) > 0 else math.inf)
    grids, timings = {}, {}
    for name, cloud in clouds.items():
        t0 = time.perf_counter()
        C = build_measure_dowker(distance_lambda(S, cloud), build)
        t1 = time.perf_counter()
        grids[name] = hilbert_grid(C, p.m_values, p.r_values, p.degree)
        t2 = time.perf_counter()
        timings[name] = {"build": t1 - t0, "homology": t2 - t1, "simplices": len(C)}
    return AnnulusResult(grids, timings, clouds)


@dataclass
class ERResult:
    h0: HilbertGrid
    h1: HilbertGrid
    seconds: float
    simplices: int


def run_er_experiment(n: int, m_list, p_grid, seed, dim_max: int = 2) -> ERResult:
    """Dowker complexes of the sublevel sets ``{L <= p}`` of an ``n x n`` uniform matrix.

    Radii are not halved, so the grid's ``r`` axis is the threshold ``p``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    m_list = sorted(m_list)
    p_grid = sorted(p_grid)
    if not m_list or not p_grid:
        raise ValueError("m_list and p_grid must be non-empty")
    t0 = time.perf_counter()
    L = random_uniform_lambda(n, n, seed)
    top = max(p_grid)
    params = BuildParams(m_max=int(math.ceil(max(m_list))), dim_max=dim_max,
                         r_max=top if top > 0 else math.inf, halve_radii=False)
    C = build_measure_dowker(L, params)
    h0 = hilbert_grid(C, m_list, p_grid, 0)
    h1 = hilbert_grid(C, m_list, p_grid, 1)
    return ERResult(h0, h1, time.perf_counter() - t0, len(C))
