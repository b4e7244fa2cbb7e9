"""Exact arithmetic in the integral quaternions and their half-integer coset.

Quaternions are stored through doubled integer coordinates, so the order
B(Z) (all coordinates integral) and the shifted coset B(Z) + (1+i+j+k)/2
(all coordinates half-odd) live in a single integer representation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import isqrt

import numpy as np

INTEGRAL = "integral"
COSET = "coset"


class CapacityError(Exception):
    """Raised when an enumeration exceeds its point budget."""


@dataclass(frozen=True, order=True)
class Quaternion:
    """Quaternion (c1 + c2*i + c3*j + c4*k)/2 with doubled integer coordinates.

    All four doubled coordinates must share parity: even coordinates give an
    element of B(Z), odd coordinates an element of the coset B(Z)+xi with
    xi = (1+i+j+k)/2.
    """

    c1: int
    c2: int
    c3: int
    c4: int

    def __post_init__(self):
        p = self.c1 & 1
        if (self.c2 & 1) != p or (self.c3 & 1) != p or (self.c4 & 1) != p:
            raise ValueError(
                f"mixed-parity doubled coordinates: "
                f"({self.c1},{self.c2},{self.c3},{self.c4})"
            )

    @classmethod
    def from_int_coords(cls, a, b, c, d):
        """Element a + b*i + c*j + d*k of B(Z)."""
        return cls(2 * a, 2 * b, 2 * c, 2 * d)

    @property
    def parity(self):
        return COSET if self.c1 & 1 else INTEGRAL

    @property
    def int_coords(self):
        """True coordinates; only valid for integral elements."""
        if self.c1 & 1:
            raise ValueError("coset element has half-integer coordinates")
        return (self.c1 // 2, self.c2 // 2, self.c3 // 2, self.c4 // 2)

    def conjugate(self):
        return Quaternion(self.c1, -self.c2, -self.c3, -self.c4)

    def nr(self):
        """Reduced norm, always a nonnegative integer."""
        s = self.c1 * self.c1 + self.c2 * self.c2 + self.c3 * self.c3 + self.c4 * self.c4
        assert s % 4 == 0
        return s // 4

    def tr(self):
        """Reduced trace; equals the doubled first coordinate."""
        return self.c1

    def __mul__(self, other):
        if not isinstance(other, Quaternion):
            return NotImplemented
        a1, a2, a3, a4 = self.c1, self.c2, self.c3, self.c4
        b1, b2, b3, b4 = other.c1, other.c2, other.c3, other.c4
        d1 = a1 * b1 - a2 * b2 - a3 * b3 - a4 * b4
        d2 = a1 * b2 + a2 * b1 + a3 * b4 - a4 * b3
        d3 = a1 * b3 - a2 * b4 + a3 * b1 + a4 * b2
        d4 = a1 * b4 + a2 * b3 - a3 * b2 + a4 * b1
        # product of doubled coordinates carries a factor 4; one factor 2 stays
        assert d1 % 2 == 0 and d2 % 2 == 0 and d3 % 2 == 0 and d4 % 2 == 0
        return Quaternion(d1 // 2, d2 // 2, d3 // 2, d4 // 2)

    def __neg__(self):
        return Quaternion(-self.c1, -self.c2, -self.c3, -self.c4)

    def unit_vector(self):
        """Float coordinates of q/sqrt(nr(q)) as a 4-vector on S^3."""
        n = self.nr()
        if n == 0:
            raise ValueError("zero quaternion has no unit vector")
        s = 2.0 * n ** 0.5
        return np.array([self.c1 / s, self.c2 / s, self.c3 / s, self.c4 / s])

    def __repr__(self):
        return f"Quaternion({self.c1}, {self.c2}, {self.c3}, {self.c4})"


ONE = Quaternion.from_int_coords(1, 0, 0, 0)
I = Quaternion.from_int_coords(0, 1, 0, 0)
J = Quaternion.from_int_coords(0, 0, 1, 0)
K = Quaternion.from_int_coords(0, 0, 0, 1)
XI = Quaternion(1, 1, 1, 1)

#: the eight units of B(Z)
UNITS = (ONE, -ONE, I, -I, J, -J, K, -K)


def quat_mul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product; nr is multiplicative."""
    return a * b


def quat_invariants(a: Quaternion):
    """Return (conjugate, reduced norm, reduced trace)."""
    return a.conjugate(), a.nr(), a.tr()


# ---------------------------------------------------------------------------
# shell enumeration and counting tables


def _round_up_pow2(x):
    n = 1
    while n < x:
        n *= 2
    return n


@lru_cache(maxsize=None)
def _r3_counts(limit: int) -> np.ndarray:
    """r3[s] = #{(a,b,c) in Z^3 : a^2+b^2+c^2 = s} for s <= limit."""
    rmax = isqrt(limit)
    ax = np.arange(-rmax, rmax + 1, dtype=np.int64) ** 2
    s = ax[:, None, None] + ax[None, :, None] + ax[None, None, :]
    cnt = np.bincount(s.ravel(), minlength=limit + 1)
    return cnt[: limit + 1]


def r3_counts(limit: int) -> np.ndarray:
    return _r3_counts(_round_up_pow2(max(limit, 16)))


@lru_cache(maxsize=None)
def _r3_odd_counts(limit: int) -> np.ndarray:
    """Counts of odd triples (a,b,c), all odd, with a^2+b^2+c^2 = s <= limit."""
    rmax = isqrt(limit)
    vals = np.arange(-rmax | 1, rmax + 1, 2, dtype=np.int64) ** 2
    s = vals[:, None, None] + vals[None, :, None] + vals[None, None, :]
    cnt = np.bincount(s.ravel(), minlength=limit + 1)
    return cnt[: limit + 1]


def r3_odd_counts(limit: int) -> np.ndarray:
    return _r3_odd_counts(_round_up_pow2(max(limit, 16)))


@lru_cache(maxsize=None)
def _triples_by_s(limit: int):
    """All integer triples with norm <= limit, bucketed by their norm."""
    rmax = isqrt(limit)
    ax = np.arange(-rmax, rmax + 1, dtype=np.int64)
    A, B, C = np.meshgrid(ax, ax, ax, indexing="ij")
    T = np.stack([A.ravel(), B.ravel(), C.ravel()], axis=1)
    s = (T * T).sum(axis=1)
    keep = s <= limit
    T, s = T[keep], s[keep]
    order = np.lexsort((T[:, 2], T[:, 1], T[:, 0], s))
    T, s = T[order], s[order]
    starts = np.searchsorted(s, np.arange(limit + 2))
    return T, starts


@lru_cache(maxsize=None)
def _odd_triples_by_s(limit: int):
    rmax = isqrt(limit)
    ax = np.arange(-(rmax | 1), rmax + 1, 2, dtype=np.int64)
    A, B, C = np.meshgrid(ax, ax, ax, indexing="ij")
    T = np.stack([A.ravel(), B.ravel(), C.ravel()], axis=1)
    s = (T * T).sum(axis=1)
    keep = s <= limit
    T, s = T[keep], s[keep]
    order = np.lexsort((T[:, 2], T[:, 1], T[:, 0], s))
    T, s = T[order], s[order]
    starts = np.searchsorted(s, np.arange(limit + 2))
    return T, starts


@dataclass(frozen=True)
class NormShell:
    """All quaternions of one parity class with a fixed reduced norm.

    ``coords`` holds doubled coordinates, one row per element, sorted
    lexicographically on (c1, c2, c3, c4).
    """

    k: int
    parity: str
    coords: np.ndarray

    @property
    def elements(self):
        return tuple(Quaternion(*(int(v) for v in row)) for row in self.coords)

    def __len__(self):
        return len(self.coords)


@lru_cache(maxsize=4096)
def enumerate_shell(k: int, parity: str = INTEGRAL) -> NormShell:
    """Complete, duplicate-free, lexicographically sorted norm-k shell."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if parity == INTEGRAL:
        T, starts = _triples_by_s(_round_up_pow2(max(k, 16)))
        rows = []
        for m1 in range(-isqrt(k), isqrt(k) + 1):
            s = k - m1 * m1
            blk = T[starts[s]: starts[s + 1]]
            if len(blk):
                full = np.empty((len(blk), 4), dtype=np.int64)
                full[:, 0] = 2 * m1
                full[:, 1:] = 2 * blk
                rows.append(full)
        coords = np.concatenate(rows) if rows else np.empty((0, 4), dtype=np.int64)
    elif parity == COSET:
        if k % 2 == 0:
            return NormShell(k, parity, np.empty((0, 4), dtype=np.int64))
        S = 4 * k
        T, starts = _odd_triples_by_s(_round_up_pow2(max(S, 16)))
        rows = []
        top = isqrt(S)
        for c1 in range(-(top | 1), top + 1, 2):
            s = S - c1 * c1
            if s < 0 or s >= len(starts) - 1:
                continue
            blk = T[starts[s]: starts[s + 1]]
            if len(blk):
                full = np.empty((len(blk), 4), dtype=np.int64)
                full[:, 0] = c1
                full[:, 1:] = blk
                rows.append(full)
        coords = np.concatenate(rows) if rows else np.empty((0, 4), dtype=np.int64)
    else:
        raise ValueError(f"unknown parity {parity!r}")
    if len(coords):
        order = np.lexsort((coords[:, 3], coords[:, 2], coords[:, 1], coords[:, 0]))
        coords = coords[order]
    coords.setflags(write=False)
    return NormShell(k, parity, coords)


def r4_count(k: int) -> int:
    """Number of elements of B(Z) with reduced norm k (8*sigma(k) for odd k)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    r3 = r3_counts(k)
    m1s = np.arange(-isqrt(k), isqrt(k) + 1, dtype=np.int64)
    return int(r3[k - m1s * m1s].sum())


def m1_profile(k: int, parity: str = INTEGRAL):
    """Distribution of the doubled first coordinate over the norm-k shell.

    Returns two arrays (c1_values, counts); the reduced trace of an element
    is its doubled first coordinate.
    """
    if parity == INTEGRAL:
        r3 = r3_counts(k)
        m1s = np.arange(-isqrt(k), isqrt(k) + 1, dtype=np.int64)
        cnts = r3[k - m1s * m1s]
        keep = cnts > 0
        return 2 * m1s[keep], cnts[keep]
    if parity == COSET:
        if k % 2 == 0:
            return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
        S = 4 * k
        r3o = r3_odd_counts(S)
        top = isqrt(S)
        c1s = np.arange(-(top | 1), top + 1, 2, dtype=np.int64)
        c1s = c1s[c1s * c1s <= S]
        cnts = r3o[S - c1s * c1s]
        keep = cnts > 0
        return c1s[keep], cnts[keep]
    raise ValueError(f"unknown parity {parity!r}")
