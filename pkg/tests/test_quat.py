import numpy as np
import pytest
from hypothesis import given, strategies as st

from hecke_sphere.quat import (
    ONE, I, J, K, XI, UNITS,
    Quaternion, enumerate_shell, m1_profile, r4_count,
)


def sigma(k: int) -> int:
    return sum(d for d in range(1, k + 1) if k % d == 0)


def brute_shell_integral(k):
    out = []
    r = int(k ** 0.5) + 1
    for a in range(-r, r + 1):
        for b in range(-r, r + 1):
            for c in range(-r, r + 1):
                for d in range(-r, r + 1):
                    if a * a + b * b + c * c + d * d == k:
                        out.append((2 * a, 2 * b, 2 * c, 2 * d))
    return sorted(out)


def brute_shell_coset(k):
    # half-integer coordinates: all doubled coordinates odd
    out = []
    r = 2 * int(k ** 0.5) + 3
    for a in range(-r, r + 1, 2):
        for b in range(-r, r + 1, 2):
            for c in range(-r, r + 1, 2):
                for d in range(-r, r + 1, 2):
                    if a % 2 and a * a + b * b + c * c + d * d == 4 * k:
                        out.append((a, b, c, d))
    return sorted(out)


def test_hamilton_table():
    assert I * J == K
    assert J * K == I
    assert K * I == J
    assert J * I == -K
    assert I * I == -ONE
    assert I * J * K == Quaternion(-2, 0, 0, 0)


def test_units_and_xi():
    assert len(UNITS) == 8
    assert all(u.nr() == 1 for u in UNITS)
    assert XI.nr() == 1
    assert XI.tr() == 1


quat_coords = st.tuples(*[st.integers(-20, 20)] * 4)


@given(quat_coords, quat_coords)
def test_norm_multiplicative(a, b):
    x = Quaternion.from_int_coords(*a)
    y = Quaternion.from_int_coords(*b)
    assert (x * y).nr() == x.nr() * y.nr()


@given(quat_coords, quat_coords)
def test_conjugate_antiautomorphism(a, b):
    x = Quaternion.from_int_coords(*a)
    y = Quaternion.from_int_coords(*b)
    assert (x * y).conjugate() == y.conjugate() * x.conjugate()


@given(quat_coords)
def test_norm_is_self_times_conjugate(a):
    x = Quaternion.from_int_coords(*a)
    assert x * x.conjugate() == Quaternion(2 * x.nr(), 0, 0, 0)


@pytest.mark.parametrize("k", [1, 3, 5, 9, 15, 27, 99, 343])
def test_r4_jacobi_odd(k):
    assert r4_count(k) == 8 * sigma(k)


def test_r4_even():
    # even k: 24 * sigma(odd part)
    assert r4_count(2) == 24
    assert r4_count(4) == 24
    assert r4_count(8) == 24
    assert r4_count(6) == 24 * sigma(3)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 7, 12, 25])
def test_shell_against_brute_force(k):
    sh = enumerate_shell(k, "integral")
    assert sorted(map(tuple, sh.coords.tolist())) == brute_shell_integral(k)
    assert len(sh) == r4_count(k)


@pytest.mark.parametrize("k", [1, 3, 5, 9])
def test_coset_shell_against_brute_force(k):
    sh = enumerate_shell(k, "coset")
    assert sorted(map(tuple, sh.coords.tolist())) == brute_shell_coset(k)


def test_coset_even_norms_empty():
    assert len(enumerate_shell(2, "coset")) == 0
    assert len(enumerate_shell(6, "coset")) == 0


def test_coset_unit_count():
    # the 16 half-integer units (all coordinates +-1/2)
    assert len(enumerate_shell(1, "coset")) == 16


@pytest.mark.parametrize("parity,k", [("integral", 10), ("coset", 11)])
def test_m1_profile_matches_shell(parity, k):
    c1s, counts = m1_profile(k, parity)
    sh = enumerate_shell(k, parity)
    assert counts.sum() == len(sh)
    vals, brute = np.unique(sh.coords[:, 0], return_counts=True)
    assert list(c1s) == list(vals)
    assert list(counts) == list(brute)


def test_shell_norms():
    for k in (5, 13):
        for m in enumerate_shell(k, "integral").elements:
            assert m.nr() == k
