"""Theta-kernel coefficients, the central identity, and the norm estimate.

The degree-n kernel attached to unit quaternions x, y produces a weight
n+2 cusp form whose k-th Fourier coefficient is

    c_k(x, y) = k^(n/2) * sum_{nr(m)=k} U_n( tr(m x conj(y)) / (2 sqrt(k)) )

over the integer quaternion shell.  With x = q_x/sqrt(N_x) for an integral
q_x, the Chebyshev re-expansion keeps every coefficient an exact rational
whenever N_x N_y is a perfect square.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import numpy as np

from .hecke import SpectralDecomposition
from .poly import basis_values, harmonic_basis
from .quat import Quaternion, enumerate_shell, m1_profile
from .zonal import cheb_coeffs, chebyshev_U_vec


def _as_quat(q) -> Quaternion:
    if isinstance(q, Quaternion):
        return q
    return Quaternion.from_int_coords(*q)


def _trace_values(k: int, qx: Quaternion, qy: Quaternion) -> np.ndarray:
    """tr(m q_x conj(q_y)) over the norm-k integral shell, exact integers."""
    w = qx * qy.conjugate()
    # tr(m w) = (c(m) . (w1, -w2, -w3, -w4)) / 2 in doubled coordinates
    vec = np.array([w.c1, -w.c2, -w.c3, -w.c4], dtype=np.int64)
    sh = enumerate_shell(k, "integral")
    prod = sh.coords @ vec
    assert not np.any(prod & 1)
    return prod // 2


@dataclass(frozen=True)
class ThetaCoefficient:
    n: int
    k: int
    qx: Quaternion
    qy: Quaternion
    value: object  # Fraction, or None when N_x N_y is not a perfect square
    float_value: float


def theta_coefficient(n: int, x, y, k: int) -> ThetaCoefficient:
    """k-th Fourier coefficient of the degree-n theta kernel at (x, y)."""
    if k < 1:
        raise ValueError("coefficients start at k = 1; there is no constant term")
    qx, qy = _as_quat(x), _as_quat(y)
    Nx, Ny = qx.nr(), qy.nr()
    traces = _trace_values(k, qx, qy)

    # float path: direct summation of U_n at t / (2 sqrt(k N_x N_y))
    denom = 2.0 * math.sqrt(float(k) * Nx * Ny)
    fv = float(k) ** (n / 2) * float(np.sum(chebyshev_U_vec(n, traces / denom)))

    S = isqrt(Nx * Ny)
    if S * S != Nx * Ny:
        return ThetaCoefficient(n, k, qx, qy, None, fv)

    tvals, counts = np.unique(traces, return_counts=True)
    a = cheb_coeffs(n)
    total = Fraction(0)
    for T, cnt in zip(tvals.tolist(), counts.tolist()):
        acc = Fraction(0)
        for j in range(n % 2, n + 1, 2):
            if a[j]:
                acc += Fraction(a[j] * T ** j * k ** ((n - j) // 2),
                                (2 * S) ** j)
        total += cnt * acc
    if total != 0:
        rel = abs(fv - float(total)) / abs(float(total))
        if rel > 1e-9:
            raise ArithmeticError(
                f"exact/float disagreement {rel:.2e} at n={n}, k={k}")
    return ThetaCoefficient(n, k, qx, qy, total, fv)


def _point(q: Quaternion) -> np.ndarray:
    c = np.array([q.c1, q.c2, q.c3, q.c4], dtype=float) / 2.0
    return c / math.sqrt(q.nr())


def spectral_coefficient(n: int, x, y, k: int,
                         dec: SpectralDecomposition) -> float:
    """Spectral side of the central identity: the k-th coefficient of
    (8/(n+1)) sum_j phi_j(x) phi_j(y) Phi_j."""
    if dec.n != n:
        raise ValueError("decomposition was computed for a different degree")
    qx, qy = _as_quat(x), _as_quat(y)
    hb = harmonic_basis(n)
    pts = np.stack([_point(qx), _point(qy)])
    B = basis_values(hb, pts)  # (dim, 2)
    total = 0.0
    for sp in dec.spaces:
        lam = dec.eigenvalue_of(sp, k)
        vals = sp.vectors.T @ B  # (mult, 2)
        total += lam * float(vals[:, 0] @ vals[:, 1])
    return (8.0 / (n + 1)) * total * float(k) ** (n / 2)


def coset_coefficient(n: int, x, k: int) -> float:
    """Coefficient of e(kz/2) in the expansion of the shifted kernel at the
    cusp 1, evaluated at x = y; zero for even k since coset norms are odd."""
    if k % 2 == 0:
        return 0.0
    qx = _as_quat(x)
    # x conj(x) = 1 on the unit sphere, so tr(m x conj(x)) = tr(m)
    c1s, counts = m1_profile(k, "coset")
    ts = c1s / (2.0 * math.sqrt(k))
    vals = chebyshev_U_vec(n, ts)
    return -float(k) ** (n / 2) * float(counts @ vals)


# ---------------------------------------------------------------------------
# modularity


DEFAULT_X = Quaternion(2, 4, 4, 0)  # (1+2i+2j)/3, norm 9
DEFAULT_Y = Quaternion(2, 0, 0, 0)  # 1


def _coeff_tail_bound(n: int, K: int, y: float) -> float:
    """Rigorous bound on sum_{k>K} (n+1) r4(k) k^(n/2) e^(-2 pi k y).

    Uses r4(k) <= 24 k (1 + ln k) and a geometric-ratio majorant; valid
    once the term ratio is below 1.
    """
    def log_term(k):
        return (math.log(24 * (n + 1)) + math.log(k) + math.log1p(math.log(k))
                + 0.5 * n * math.log(k) - 2 * math.pi * k * y)

    k0 = K + 1
    ratio = math.exp(log_term(k0 + 1) - log_term(k0))
    if ratio >= 0.999:
        return math.inf
    return math.exp(log_term(k0)) / (1.0 - ratio)


@dataclass(frozen=True)
class ModularityResult:
    n: int
    K: int
    residual: float
    tail_bound: float
    value: complex


def modularity_check(n: int, gamma, z: complex, K: int = 0,
                     x=DEFAULT_X, y=DEFAULT_Y,
                     tail_tol: float = 1e-8) -> ModularityResult:
    """Relative residual |F(gamma z) - (cz+d)^(n+2) F(z)| / |F(z)|.

    Both evaluations truncate the Fourier series at K terms; K grows
    automatically until the certified truncation tail, relative to |F(z)|,
    drops below ``tail_tol``.
    """
    (a, b), (c, d) = gamma
    if a * d - b * c != 1:
        raise ValueError("gamma must have determinant 1")
    if c % 4 != 0:
        raise ValueError("lower-left entry must be divisible by 4")
    gz = (a * z + b) / (c * z + d)
    ymin = min(z.imag, gz.imag)
    if ymin <= 0:
        raise ValueError("both points must lie in the upper half-plane")

    K = K or 64
    coeffs = {}
    while True:
        for k in range(1, K + 1):
            if k not in coeffs:
                tc = theta_coefficient(n, x, y, k)
                # exact rationals kill roundoff; identically-zero kernels
                # (possible when the cusp space is trivial) stay exact zeros
                coeffs[k] = float(tc.value) if tc.value is not None else tc.float_value
        tail = _coeff_tail_bound(n, K, ymin)
        scale = abs(c * z + d) ** (n + 2)
        if all(v == 0.0 for v in coeffs.values()):
            # kernel vanishes identically up to K; residual is the tail alone
            if tail * (1 + scale) < tail_tol:
                return ModularityResult(n=n, K=K, residual=0.0,
                                        tail_bound=tail * (1 + scale),
                                        value=0j)
        else:
            Fz = sum(coeffs[k] * cmath.exp(2j * math.pi * k * z)
                     for k in range(1, K + 1))
            Fgz = sum(coeffs[k] * cmath.exp(2j * math.pi * k * gz)
                      for k in range(1, K + 1))
            cmax = max(abs(v) * math.exp(-2 * math.pi * k * z.imag)
                       for k, v in coeffs.items())
            if abs(Fz) < 1e-3 * cmax:
                raise ValueError("test point is ill-conditioned: |F(z)| too small")
            rel_tail = tail * (1 + scale) / abs(Fz)
            if rel_tail < tail_tol:
                residual = abs(Fgz - (c * z + d) ** (n + 2) * Fz) / abs(Fz)
                return ModularityResult(n=n, K=K, residual=residual,
                                        tail_bound=rel_tail, value=Fz)
        if K >= 4096:
            raise ValueError(f"tail bound not certified by K=4096")
        K *= 2


# ---------------------------------------------------------------------------
# Petersson-norm estimate


@dataclass(frozen=True)
class PeterssonEstimate:
    n: int
    K: int
    log_I1: float
    log_I2: float
    rho: float
    tail_ratio: float  # certified bound on tail / (I1 + I2)


def _log_upper_gamma(n_plus_1: int, x: np.ndarray, dtype) -> np.ndarray:
    """log Gamma(n+1, x) via the exact upward recurrence from Gamma(1, x)."""
    x = np.asarray(x, dtype=dtype)
    g = -x
    lx = np.log(x)
    for s in range(1, n_plus_1):
        g = np.logaddexp(math.log(s) + g, s * lx - x)
    return g


def _shell_kernel_sum(n: int, k: int, parity: str) -> float:
    c1s, counts = m1_profile(k, parity)
    if not len(c1s):
        return 0.0
    vals = chebyshev_U_vec(n, c1s / (2.0 * math.sqrt(k)))
    return float(counts @ vals)


def _logsumexp(v: np.ndarray) -> float:
    if not len(v):
        return -math.inf
    m = np.max(v)
    if not np.isfinite(m):
        return float(m)
    return float(m + np.log(np.sum(np.exp(v - m))))


def petersson_estimate(n: int, K: int,
                       precision: str = "double") -> PeterssonEstimate:
    """Truncated strip-integral estimate of the normalised kernel norm.

    rho(n) = (4 pi)^n / Gamma(n+2) * 2^(-n-1) * (I1 + I2), where I1 sums
    k^n S_k^2 Gamma(n+1, sqrt(3) pi k) / (2 pi k)^(n+1) over all k and I2
    is the analogous coset sum over odd k.  Both strips share the same
    exponential scale: the half-frequency expansions e(kz/2) still have
    squared modulus e^(-2 pi k y).  All magnitudes are handled in log space.
    """
    if n < 0 or n % 2:
        raise ValueError("n must be a nonnegative even integer")
    if K < 10 * n:
        raise ValueError(
            f"K={K} < 10n={10 * n}: the tail certificate needs K >= 10n")
    dtype = np.longdouble if precision == "extended" else np.float64
    ks = np.arange(1, K + 1)

    def strip(parity):
        S = np.array([_shell_kernel_sum(n, int(k), parity) for k in ks])
        mask = S != 0.0
        kk = ks[mask].astype(dtype)
        logS2 = 2.0 * np.log(np.abs(S[mask]).astype(dtype))
        lg = _log_upper_gamma(n + 1, math.sqrt(3) * math.pi * kk, dtype)
        terms = logS2 + n * np.log(kk) + lg - (n + 1) * np.log(2 * math.pi * kk)
        return _logsumexp(terms)

    log_I1 = strip("integral")
    log_I2 = strip("coset")
    log_sum = np.logaddexp(log_I1, log_I2)

    def log_tail():
        # |S_k| <= 24 (n+1) k (1 + ln k); Gamma(s,x) <= 2 x^(s-1) e^(-x)
        # once x >= 2(s-1), which sqrt(3) pi k > 5 K >= 50 n guarantees.
        def lt(k):
            xk = math.sqrt(3) * math.pi * k
            return (2 * (math.log(24 * (n + 1)) + math.log(k)
                         + math.log1p(math.log(k)))
                    + n * math.log(k) + math.log(2) + n * math.log(xk) - xk
                    - (n + 1) * math.log(2 * math.pi * k))
        k0 = K + 1
        r = math.exp(lt(k0 + 1) - lt(k0))
        if r >= 0.999:
            return math.inf
        return lt(k0) - math.log1p(-r)

    # one tail majorant covers both strips; double it for the pair
    tail = log_tail() + math.log(2)
    tail_ratio = float(np.exp(tail - log_sum))

    log_rho = (n * math.log(4 * math.pi) - math.lgamma(n + 2)
               - (n + 1) * math.log(2) + log_sum)
    return PeterssonEstimate(n=n, K=K, log_I1=float(log_I1),
                             log_I2=float(log_I2), rho=float(np.exp(log_rho)),
                             tail_ratio=tail_ratio)
