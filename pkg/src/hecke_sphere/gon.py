"""Geometry-of-numbers counting apparatus.

Covers the quaternion shells by cylinder classes C(R) (imaginary part at
most nr/R^2), counts them exactly against the predicted bounds, computes
the capped counting function A(X), and verifies Minkowski's second theorem
and the successive-minima product bound on concrete 4-dimensional bodies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from math import isqrt

import numpy as np

from .quat import CapacityError, Quaternion, _r3_counts, r4_count

EPSILON = 0.1  # fixed exponent slack folded into fitted constants


@dataclass(frozen=True)
class CountRecord:
    family: str
    params: tuple
    count: int
    bound: float

    @property
    def ratio(self) -> float:
        return self.count / self.bound


def in_cylinder_class(m: Quaternion, R: int) -> bool:
    """Exact test of m2^2+m3^2+m4^2 <= nr(m)/R^2 in doubled coordinates."""
    s4 = m.c2 ** 2 + m.c3 ** 2 + m.c4 ** 2
    nr4 = m.c1 ** 2 + s4
    return R * R * s4 <= nr4


def _m1_count(lo: int, hi: int) -> int:
    """Number of integers m1 with lo <= m1^2 <= hi, signs included."""
    if hi < 0 or hi < lo:
        return 0
    b = isqrt(hi)
    a = 0 if lo <= 0 else isqrt(lo - 1) + 1
    if a > b:
        return 0
    return 2 * (b - a + 1) if a >= 1 else 2 * b + 1


def shell_class_count(k: int, R: int) -> CountRecord:
    """|{nr(m) = k, m in C(R)}| with the single-shell bound alongside."""
    if k < 1 or R < 1:
        raise ValueError("need k >= 1 and R >= 1")
    r3 = _r3_counts(k)
    count = 0
    for s in range(0, k // (R * R) + 1):
        rem = k - s
        r = isqrt(rem)
        if r * r == rem:
            count += int(r3[s]) * (2 if rem > 0 else 1)
    bound = (1 + math.sqrt(k) / R + k / R ** 3) * k ** EPSILON
    return CountRecord("singlebound", (k, R), count, bound)


def dyadic_class_count(M: int, R: int) -> CountRecord:
    """|{M < nr(m) <= 2M, m in C(R)}| with the cylinder bound alongside."""
    if M < 1 or R < 1:
        raise ValueError("need M >= 1 and R >= 1")
    r3 = _r3_counts(2 * M)
    count = 0
    for s in range(0, 2 * M + 1):
        # C(R) membership s R^2 <= m1^2 + s, plus the norm window
        lo = max(s * (R * R - 1), M - s + 1)
        hi = 2 * M - s
        c = _m1_count(lo, hi)
        if c:
            count += int(r3[s]) * c
    bound = math.sqrt(M) + M ** 2 / R ** 3
    return CountRecord("intbound", (M, R), count, bound)


def d_class_counts(k: int, i_max: int):
    """Partition of the norm-k shell into D(2^i) = C(2^i) \\ C(2^(i+1)).

    Returns (counts, core): counts[i] = |D(2^i) shell members| and core the
    purely real members (imaginary part zero), which lie in every C(R).
    """
    cs = [shell_class_count(k, 2 ** i).count for i in range(i_max + 2)]
    core = _m1_count(k, k)  # s = 0 members
    counts = [cs[i] - cs[i + 1] for i in range(i_max + 1)]
    return counts, core


def a_of_x(n: int, X: int) -> float:
    """A(X): sum over k <= X of the squared capped shell sums.

    The shell summand min(n+1, sqrt(k/s)) with s the imaginary norm is
    irrational, so the outer accumulation is floating point over exact
    integer shell counts; the s = 0 members take the capped value n + 1.
    """
    if X < 1:
        raise ValueError("need X >= 1")
    r3 = _r3_counts(X)
    total = 0.0
    for k in range(1, X + 1):
        inner = 0.0
        for m1 in range(0, isqrt(k) + 1):
            s = k - m1 * m1
            mult = 2 if m1 > 0 else 1
            if s == 0:
                inner += mult * (n + 1)
            elif r3[s]:
                inner += mult * int(r3[s]) * min(n + 1.0, math.sqrt(k / s))
        total += inner * inner
    return total


def fit_constant(records) -> float:
    """Smallest C with count <= C * bound across a family of records."""
    return max((r.ratio for r in records), default=0.0)


# ---------------------------------------------------------------------------
# convex bodies and successive minima


@dataclass(frozen=True)
class CylinderSpec:
    """0-symmetric cylinder x1^2 <= 2M, x2^2+x3^2+x4^2 <= 2M/R^2."""

    M: int
    R: int

    def __post_init__(self):
        if self.M < 1 or self.R < 1 or self.R & (self.R - 1):
            raise ValueError("need M >= 1 and R a power of two")

    def gauge_sq(self, v) -> Fraction:
        """Exact squared gauge: v in t*body iff gauge_sq(v) <= t^2."""
        s = v[1] ** 2 + v[2] ** 2 + v[3] ** 2
        return Fraction(max(v[0] ** 2, self.R ** 2 * s), 2 * self.M)

    def gauge_sq_float(self, V: np.ndarray) -> np.ndarray:
        s = V[:, 1] ** 2 + V[:, 2] ** 2 + V[:, 3] ** 2
        return np.maximum(V[:, 0] ** 2, float(self.R ** 2) * s) / (2.0 * self.M)

    def norm_coeff(self) -> float:
        # gauge_sq(v) >= coeff * |v|^2
        R2 = self.R ** 2
        return R2 / ((1 + R2) * 2.0 * self.M)

    def bbox(self) -> tuple:
        a = math.sqrt(2 * self.M)
        return (a, a / self.R, a / self.R, a / self.R)

    def volume(self) -> float:
        return 2 * math.sqrt(2 * self.M) * (4 / 3) * math.pi * (2 * self.M / self.R ** 2) ** 1.5


@dataclass(frozen=True)
class Box:
    """Axis box |x_i| <= h_i, for closed-form test instances."""

    h: tuple

    def gauge_sq(self, v) -> Fraction:
        return max(Fraction(int(v[i]) ** 2, self.h[i] ** 2) for i in range(4))

    def gauge_sq_float(self, V: np.ndarray) -> np.ndarray:
        return np.max(V.astype(float) ** 2
                      / np.array(self.h, dtype=float) ** 2, axis=1)

    def norm_coeff(self) -> float:
        return 1.0 / sum(float(hi) ** 2 for hi in self.h)

    def bbox(self) -> tuple:
        return tuple(float(hi) for hi in self.h)

    def volume(self) -> float:
        return math.prod(2.0 * hi for hi in self.h)


def _exact_rank(rows) -> int:
    """Rank of a list of integer 4-vectors by fraction-free elimination."""
    mat = [list(map(Fraction, r)) for r in rows]
    rank, col = 0, 0
    while rank < len(mat) and col < 4:
        piv = next((r for r in range(rank, len(mat)) if mat[r][col]), None)
        if piv is None:
            col += 1
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        for r in range(rank + 1, len(mat)):
            if mat[r][col]:
                f = mat[r][col] / mat[rank][col]
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[rank])]
        rank += 1
        col += 1
    return rank


def _cube_points(basis: np.ndarray, r: int, budget: int):
    npts = (2 * r + 1) ** 4
    if npts > budget:
        raise CapacityError(
            f"enumeration of {npts} points exceeds the {budget} budget")
    ax = np.arange(-r, r + 1)
    C = np.stack(np.meshgrid(ax, ax, ax, ax, indexing="ij"),
                 axis=-1).reshape(-1, 4)
    V = C @ basis.T
    return C, V


def _greedy_minima(C: np.ndarray, V: np.ndarray, body):
    """Linearly independent points in gauge order; returns up to 4 minima."""
    g = body.gauge_sq_float(V.astype(float))
    order = np.argsort(g, kind="stable")
    chosen, lams = [], []
    for idx in order:
        if not np.any(C[idx]):
            continue
        if chosen and _exact_rank(chosen + [C[idx]]) == len(chosen):
            continue
        chosen.append(C[idx].tolist())
        lams.append(math.sqrt(float(body.gauge_sq(V[idx].tolist()))))
        if len(lams) == 4:
            break
    return lams


def _body_region(basis: np.ndarray, body, t: float, budget: int):
    """All lattice points of t * body: per-axis coefficient box enumeration."""
    invB = np.linalg.inv(basis.astype(float))
    radii = np.floor(np.abs(invB) @ np.array(body.bbox()) * t + 1e-9).astype(int)
    npts = int(np.prod(2 * radii + 1))
    if npts > budget:
        raise CapacityError(
            f"enumeration of {npts} points exceeds the {budget} budget")
    axes = [np.arange(-r, r + 1) for r in radii]
    C = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 4)
    return C, C @ basis.T


def successive_minima(basis, body, budget: int = 10 ** 7):
    """Successive minima of ``body`` on the lattice spanned by ``basis``.

    A small coefficient cube supplies four linearly independent points,
    whose fourth gauge value t bounds lambda_4; the exact region t * body
    is then enumerated per axis, so the greedy gauge-ordered extraction
    with exact rank tests is certifiably complete.
    """
    B = np.asarray(basis, dtype=np.int64)
    if B.shape != (4, 4) or round(np.linalg.det(B.astype(float))) == 0:
        raise ValueError("basis must be a nonsingular 4x4 integer matrix")
    r = 2
    while True:
        C, V = _cube_points(B, r, budget)
        lams = _greedy_minima(C, V, body)
        if len(lams) == 4:
            break
        r *= 2
    C, V = _body_region(B, body, lams[3] * (1 + 1e-9), budget)
    lams = _greedy_minima(C, V, body)
    return tuple(lams)


def lattice_point_count(basis, body, budget: int = 10 ** 7) -> int:
    """Exact |body ∩ lattice| by bounded enumeration (origin included)."""
    B = np.asarray(basis, dtype=np.int64)
    # per-axis coefficient bounds: |c_i| <= sum_j |(B^-1)_ij| * bbox_j
    invB = np.linalg.inv(B.astype(float))
    radii = np.floor(np.abs(invB) @ np.array(body.bbox()) + 1e-9).astype(int)
    npts = int(np.prod(2 * radii + 1))
    if npts > budget:
        raise CapacityError(
            f"enumeration of {npts} points exceeds the {budget} budget")
    axes = [np.arange(-r, r + 1) for r in radii]
    C = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 4)
    V = C @ B.T
    g = body.gauge_sq_float(V.astype(float))
    count = 0
    for v in V[g <= 1.0 + 1e-12]:
        if body.gauge_sq(v.tolist()) <= 1:
            count += 1
    return count


def product_bound_check(basis, body, budget: int = 10 ** 7) -> bool:
    """|body ∩ lattice| <= prod_i (1 + 2i / lambda_i)."""
    lams = successive_minima(basis, body, budget)
    count = lattice_point_count(basis, body, budget)
    prod = math.prod(1 + 2 * (i + 1) / lams[i] for i in range(4))
    return count <= prod * (1 + 1e-12)


def minkowski_sandwich(basis, body, budget: int = 10 ** 7):
    """(lower, middle, upper) of 2^4/4! <= prod lambda_i vol/covol <= 2^4."""
    lams = successive_minima(basis, body, budget)
    covol = abs(np.linalg.det(np.asarray(basis, dtype=float)))
    middle = math.prod(lams) * body.volume() / covol
    return 16.0 / 24.0, middle, 16.0
