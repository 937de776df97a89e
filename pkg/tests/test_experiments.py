import numpy as np
import pytest
from scipy import stats

from mdowker.bifiltration import BuildParams, build_measure_dowker, slice_complex
from mdowker.experiments import (
    AnnulusParams,
    run_annulus_experiment,
    run_er_experiment,
    sample_annulus_mixture,
)
from mdowker.relations import random_uniform_lambda


def _radii(cloud):
    return np.linalg.norm(cloud.points, axis=1)


def test_clean_annulus_radii():
    X = sample_annulus_mixture(256, 0.4, 0.5, 0.0, seed=0)
    r = _radii(X)
    assert len(X) == 256
    assert np.all((r >= 0.4) & (r <= 0.5))


def test_noisy_split():
    Y = sample_annulus_mixture(256, 0.4, 0.5, 0.05, seed=1)
    r = _radii(Y)
    assert np.all((r[:243] >= 0.4) & (r[:243] <= 0.5))
    assert np.all(r[243:] <= 0.4)
    assert len(r) - 243 == 13


def test_uniform_disk():
    Z = sample_annulus_mixture(256, 0.0, 0.5, 1.0, seed=2)
    assert np.all(_radii(Z) <= 0.5)


def test_area_uniformity():
    X = sample_annulus_mixture(4000, 0.4, 0.5, 0.0, seed=3)
    sq = _radii(X) ** 2
    result = stats.kstest(sq, stats.uniform(loc=0.16, scale=0.09).cdf)
    assert result.pvalue > 1e-3


def test_sampler_determinism():
    a = sample_annulus_mixture(50, 0.4, 0.5, 0.1, seed=9)
    assert a == sample_annulus_mixture(50, 0.4, 0.5, 0.1, seed=9)
    assert a != sample_annulus_mixture(50, 0.4, 0.5, 0.1, seed=10)


@pytest.mark.parametrize("bad", [
    dict(inner=0.5, outer=0.4, noise_fraction=0.0),
    dict(inner=-0.1, outer=0.4, noise_fraction=0.0),
    dict(inner=0.1, outer=0.4, noise_fraction=1.5),
])
def test_sampler_validation(bad):
    with pytest.raises(ValueError):
        sample_annulus_mixture(10, seed=0, **bad)


SMALL = AnnulusParams(n=60, m_max=8, m_values=tuple(range(1, 9)) + (61,),
                      r_values=tuple(np.linspace(0, 0.5, 11).tolist()), landmarks_per_side=6)


def test_small_annulus_run():
    res = run_annulus_experiment(SMALL)
    assert set(res.grids) == {"X", "Y", "Z"}
    for grid in res.grids.values():
        assert grid.betti.shape == (9, 11)
        # more weight than the total mass: nothing survives
        assert not grid.betti[-1].any()
    assert [row[0] for row in res.timing_rows()] == ["X", "Y", "Z"]
    again = run_annulus_experiment(SMALL)
    assert all(res.grids[k] == again.grids[k] for k in res.grids)


def test_er_boundary_values():
    res = run_er_experiment(12, [1, 2, 3], [0.0, 0.5, 1.0], seed=4)
    assert res.h0.at(1, 1.0) == 1 and res.h1.at(1, 1.0) == 0
    assert not res.h0.betti[:, 0].any()


def test_er_slices_nest():
    L = random_uniform_lambda(10, 10, seed=5)
    C = build_measure_dowker(L, BuildParams(m_max=4, dim_max=2, halve_radii=False))
    for p in (0.3, 0.6):
        for m in range(2, 5):
            assert slice_complex(C, m, p) <= slice_complex(C, m - 1, p)
