"""Moment statistics of joint eigenfunction families on the 3-sphere.

Evaluates an orthonormal joint eigenbasis on a seeded grid, forms the
family fourth moment (restricted to eigenvalue classes with unit odd part
at N = 1), the plain fourth moment, and individual sup proxies, then
refines the best grid point by local coordinate ascent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hecke import SpectralDecomposition
from .poly import basis_values, harmonic_basis


def sphere_grid(size: int, seed: int = 0) -> np.ndarray:
    """Deterministic grid on S^3 from normalised 4D Gaussian draws."""
    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((size, 4))
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


@dataclass(frozen=True)
class MomentReport:
    n: int
    grid_size: int
    seed: int
    sup_family: float
    sup_fourth: float
    sup_individual: float
    argmax_family: tuple
    closure_error: float  # max relative deviation of sum |phi_j|^2 from (n+1)^2


def _family_stats(dec: SpectralDecomposition, pts: np.ndarray):
    hb = harmonic_basis(dec.n)
    B = basis_values(hb, pts)  # (dim, npts)
    family = np.zeros(pts.shape[0])
    fourth = np.zeros(pts.shape[0])
    closure = np.zeros(pts.shape[0])
    sup_ind = 0.0
    for sp in dec.spaces:
        vals = sp.vectors.T @ B  # (mult, npts)
        sq = vals ** 2
        closure += sq.sum(axis=0)
        if sp.t1_flag:
            block = sq.sum(axis=0)
            family += block ** 2
            fourth += (sq ** 2).sum(axis=0)
            sup_ind = max(sup_ind, float(np.abs(vals).max()))
    return family, fourth, closure, sup_ind


def _ascend(dec: SpectralDecomposition, x: np.ndarray, which: int,
            steps: int = 20):
    """Coordinate ascent of one statistic (0 = family, 1 = fourth)."""
    best = x / np.linalg.norm(x)
    val = float(_family_stats(dec, best[None, :])[which][0])
    step = 0.05
    for _ in range(steps):
        cands = np.vstack([best + d * step * e
                           for e in np.eye(4) for d in (1.0, -1.0)])
        cands /= np.linalg.norm(cands, axis=1, keepdims=True)
        stat = _family_stats(dec, cands)[which]
        i = int(np.argmax(stat))
        if stat[i] > val:
            best, val = cands[i], float(stat[i])
        else:
            step *= 0.5
    return best, val


def moment_sweep(n: int, dec: SpectralDecomposition, grid: np.ndarray,
                 seed: int = 0, refine_steps: int = 20) -> MomentReport:
    """Grid sups of the three moment statistics with local refinement."""
    if dec.n != n:
        raise ValueError("decomposition degree mismatch")
    if grid.size == 0:
        raise ValueError("grid must be nonempty")
    family, fourth, closure, sup_ind = _family_stats(dec, grid)
    target = float((n + 1) ** 2)
    closure_err = float(np.abs(closure - target).max() / target)
    i = int(np.argmax(family))
    best, fam_val = _ascend(dec, grid[i], 0, refine_steps)
    j = int(np.argmax(fourth))
    _, fourth_val = _ascend(dec, grid[j], 1, refine_steps)
    return MomentReport(
        n=n, grid_size=grid.shape[0], seed=seed,
        sup_family=max(fam_val, float(family[i])),
        sup_fourth=max(fourth_val, float(fourth[j])),
        sup_individual=sup_ind,
        argmax_family=tuple(float(v) for v in best),
        closure_error=closure_err,
    )


def pretrace_residual(dec: SpectralDecomposition, xs: np.ndarray,
                      ys: np.ndarray) -> float:
    """Max deviation of sum_j phi_j(x) phi_j(y) from (n+1) U_n(x . y)."""
    from .zonal import chebyshev_U_vec

    hb = harmonic_basis(dec.n)
    Bx = basis_values(hb, xs)
    By = basis_values(hb, ys)
    lhs = np.zeros(xs.shape[0])
    for sp in dec.spaces:
        lhs += np.einsum("jp,jp->p", sp.vectors.T @ Bx, sp.vectors.T @ By)
    rhs = (dec.n + 1) * chebyshev_U_vec(dec.n, np.einsum("pi,pi->p", xs, ys))
    return float(np.abs(lhs - rhs).max())


def growth_fit(ns, values):
    """Least-squares slope/intercept of log(value) against log(n)."""
    ns = np.asarray(ns, dtype=float)
    vs = np.asarray(values, dtype=float)
    if len(ns) < 4:
        raise ValueError("need at least 4 data points for a growth fit")
    A = np.vstack([np.log(ns), np.ones_like(ns)]).T
    coef, *_ = np.linalg.lstsq(A, np.log(vs), rcond=None)
    resid = np.log(vs) - A @ coef
    return float(coef[0]), float(coef[1]), resid
