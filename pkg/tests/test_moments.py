import numpy as np
import pytest

from hecke_sphere.hecke import decompose
from hecke_sphere.moments import (
    growth_fit, moment_sweep, pretrace_residual, sphere_grid,
)


def test_grid_deterministic_and_unit():
    a = sphere_grid(100, seed=7)
    b = sphere_grid(100, seed=7)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, sphere_grid(100, seed=8))
    assert np.allclose(np.linalg.norm(a, axis=1), 1.0)
    assert a.shape == (100, 4)


def test_growth_fit_recovers_power_law():
    ns = [4, 8, 12, 16, 24]
    slope, intercept, resid = growth_fit(ns, [2.0 * n ** 3 for n in ns])
    assert slope == pytest.approx(3.0, abs=1e-9)
    assert intercept == pytest.approx(np.log(2.0), abs=1e-9)
    assert np.abs(resid).max() < 1e-12


def test_growth_fit_flat():
    slope, _, _ = growth_fit([2, 4, 6, 8], [5.0] * 4)
    assert slope == pytest.approx(0.0, abs=1e-12)


def test_growth_fit_needs_four_points():
    with pytest.raises(ValueError):
        growth_fit([2, 4, 6], [1.0, 2.0, 3.0])


@pytest.fixture(scope="module")
def dec6():
    return decompose(6, primes=(3, 5))


def test_sweep_invariants(dec6):
    grid = sphere_grid(500, seed=7)
    rep = moment_sweep(6, dec6, grid, seed=7)
    assert rep.closure_error < 1e-10
    # Cauchy-Schwarz inside each family block: fourth <= family sup
    assert rep.sup_fourth <= rep.sup_family + 1e-9
    # sup over a nonnegative statistic never drops under refinement
    assert rep.sup_individual > 0
    assert abs(np.linalg.norm(rep.argmax_family) - 1.0) < 1e-9


def test_sweep_refinement_monotone(dec6):
    grid = sphere_grid(200, seed=3)
    raw = moment_sweep(6, dec6, grid, seed=3, refine_steps=0)
    refined = moment_sweep(6, dec6, grid, seed=3, refine_steps=20)
    assert refined.sup_family >= raw.sup_family - 1e-12
    assert refined.sup_fourth >= raw.sup_fourth - 1e-12


def test_sweep_rejects_mismatched_degree(dec6):
    with pytest.raises(ValueError):
        moment_sweep(4, dec6, sphere_grid(10))
    with pytest.raises(ValueError):
        moment_sweep(6, dec6, np.empty((0, 4)))


def test_pretrace_residual_small(dec6):
    xs = sphere_grid(50, seed=1)
    ys = sphere_grid(50, seed=2)
    assert pretrace_residual(dec6, xs, ys) < 1e-10 * (6 + 1) ** 2
    assert pretrace_residual(dec6, xs, xs) < 1e-10 * (6 + 1) ** 2


def test_closure_target(dec6):
    # sum over ALL eigenfunctions of phi^2 is the constant (n+1)^2
    grid = sphere_grid(64, seed=5)
    rep = moment_sweep(6, dec6, grid, seed=5)
    assert rep.closure_error < 1e-10
