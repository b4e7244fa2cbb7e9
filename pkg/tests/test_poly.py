from fractions import Fraction

import numpy as np
import pytest

from hecke_sphere.poly import (
    Poly4, basis_values, fischer_dot, harmonic_basis,
    monomial_sphere_integral, sphere_integral, sphere_to_fischer_ratio,
    substitute_left_mul,
)
from hecke_sphere.quat import Quaternion


def test_monomial_integral_values():
    # int x1^2 dsigma = 1/4, int x1^4 = 1/8, int x1^2 x2^2 = 1/24
    assert monomial_sphere_integral((2, 0, 0, 0)) == Fraction(1, 4)
    assert monomial_sphere_integral((4, 0, 0, 0)) == Fraction(1, 8)
    assert monomial_sphere_integral((2, 2, 0, 0)) == Fraction(1, 24)
    assert monomial_sphere_integral((1, 0, 0, 0)) == 0
    assert monomial_sphere_integral((1, 1, 2, 0)) == 0


def test_monomial_integral_monte_carlo():
    rng = np.random.default_rng(0)
    pts = rng.standard_normal((200000, 4))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    for alpha in [(2, 0, 0, 0), (2, 2, 0, 0), (4, 2, 0, 0), (2, 2, 2, 2)]:
        mc = np.prod(pts ** np.array(alpha), axis=1).mean()
        assert abs(mc - float(monomial_sphere_integral(alpha))) < 5e-3


def test_norm_poly_integrates_to_one():
    r2 = Poly4(2, {(2, 0, 0, 0): 1, (0, 2, 0, 0): 1,
                   (0, 0, 2, 0): 1, (0, 0, 0, 2): 1})
    assert sphere_integral(r2) == 1
    assert sphere_integral(r2 * r2) == 1


@pytest.mark.parametrize("n", range(0, 7))
def test_basis_harmonic_and_dimension(n):
    hb = harmonic_basis(n)
    assert hb.dim == (n + 1) ** 2
    for p in hb.basis:
        assert p.laplacian().is_zero()
        assert p.content() == 1


def test_basis_degree_one_spans_coordinates():
    hb = harmonic_basis(1)
    mons = sorted(a for p in hb.basis for a in p.coeffs)
    assert mons == [(0, 0, 0, 1), (0, 0, 1, 0), (0, 1, 0, 0), (1, 0, 0, 0)]


@pytest.mark.parametrize("n", range(0, 5))
def test_gram_diagonal_matches_direct_integrals(n):
    hb = harmonic_basis(n)
    for i, p in enumerate(hb.basis):
        for j, q in enumerate(hb.basis):
            assert sphere_integral(p * q) == hb.gram[i][j]
        assert hb.gram[i][i] > 0
    for i in range(hb.dim):
        for j in range(hb.dim):
            if i != j:
                assert hb.gram[i][j] == 0


@pytest.mark.parametrize("n", range(0, 6))
def test_fischer_to_sphere_ratio(n):
    # ratio relates the apolar pairing to the sphere integral on degree n
    ratio = sphere_to_fischer_ratio(n)
    hb = harmonic_basis(n)
    p = hb.basis[0]
    assert ratio * fischer_dot(p, p) == sphere_integral(p * p)


def test_substitute_left_mul_numeric():
    rng = np.random.default_rng(1)
    m = Quaternion.from_int_coords(2, -1, 3, 1)
    for n in (1, 2, 5):
        hb = harmonic_basis(n)
        f = hb.basis[min(2, hb.dim - 1)]
        g = substitute_left_mul(f, m)
        for _ in range(5):
            x = rng.standard_normal(4)
            mx = np.array([
                [m.c1, -m.c2, -m.c3, -m.c4],
                [m.c2, m.c1, -m.c4, m.c3],
                [m.c3, m.c4, m.c1, -m.c2],
                [m.c4, -m.c3, m.c2, m.c1],
            ]) / 2.0 @ x
            assert abs(float(g.evaluate(x)) - float(f.evaluate(mx))) < 1e-8 * max(
                1.0, abs(float(f.evaluate(mx))))


def test_substitute_preserves_harmonicity():
    m = Quaternion.from_int_coords(1, 1, 1, 0)
    hb = harmonic_basis(3)
    for f in hb.basis[:3]:
        assert substitute_left_mul(f, m).laplacian().is_zero()


def test_basis_values_shape():
    hb = harmonic_basis(2)
    pts = np.random.default_rng(2).standard_normal((10, 4))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    vals = basis_values(hb, pts)
    assert vals.shape == (hb.dim, 10)
    direct = np.array([[float(p.evaluate(x)) for x in pts] for p in hb.basis])
    assert np.allclose(vals, direct)


def test_primitive_normalization():
    p = Poly4(2, {(2, 0, 0, 0): -4, (0, 2, 0, 0): 6})
    q = p.primitive()
    assert q.content() == 1
    # sign convention: first coefficient in lex order is positive
    first = min(q.coeffs)
    assert q.coeffs[first] > 0
