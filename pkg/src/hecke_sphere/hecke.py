"""Hecke operators on the degree-n harmonic subspace.

The unscaled operator is f(x) -> sum over nr(m) = N of f(m x); the Hecke
operator T_N is that sum divided by 8 N^(n/2).  Matrices are computed
exactly through the action of every left multiplication on the monomial
basis, followed by coordinate extraction against the orthogonal harmonic
basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

import numpy as np

from . import poly
from .poly import harmonic_basis, monomials, _multifact, fischer_dot
from .quat import enumerate_shell, r4_count


class DegeneracyError(Exception):
    """Joint diagonalisation failed; re-draw the random combination."""


def _left_mul_rows(w):
    """Coefficient matrix of x -> m x on coordinates; row i gives (m x)_i."""
    w1, w2, w3, w4 = w
    return (
        (w1, -w2, -w3, -w4),
        (w2, w1, -w4, w3),
        (w3, w4, w1, -w2),
        (w4, -w3, w2, w1),
    )


@lru_cache(maxsize=None)
def _degree_tables(d: int):
    """Index plumbing for one multiplication-by-linear-form step.

    Returns (shift, groups): shift[j] maps a degree-(d-1) monomial index to
    the index of that monomial times x_j; groups[i] = (rows, parents) lists
    the degree-d monomials whose first nonzero exponent sits at slot i
    together with their quotient monomial by x_i.
    """
    mons_d, idx_d = monomials(d)
    mons_p, idx_p = monomials(d - 1)
    shift = []
    for j in range(4):
        arr = np.empty(len(mons_p), dtype=np.intp)
        for p, a in enumerate(mons_p):
            b = list(a)
            b[j] += 1
            arr[p] = idx_d[tuple(b)]
        shift.append(arr)
    groups = []
    for i in range(4):
        rows, parents = [], []
        for r, a in enumerate(mons_d):
            fi = next(t for t in range(4) if a[t] > 0)
            if fi == i:
                b = list(a)
                b[i] -= 1
                rows.append(r)
                parents.append(idx_p[tuple(b)])
        groups.append((np.array(rows, dtype=np.intp), np.array(parents, dtype=np.intp)))
    return tuple(shift), tuple(groups)


def left_mul_monomial_matrix(n: int, w, dtype=np.int64) -> np.ndarray:
    """Matrix img with img[src, tgt] = coefficient of monomial tgt in (x^src)(m x)."""
    V = _left_mul_rows(w)
    img = np.ones((1, 1), dtype=dtype)
    for d in range(1, n + 1):
        nd = len(monomials(d)[0])
        shift, groups = _degree_tables(d)
        new = np.zeros((nd, nd), dtype=dtype)
        for i in range(4):
            rows, parents = groups[i]
            if not len(rows):
                continue
            P = img[parents]
            for j in range(4):
                c = V[i][j]
                if c:
                    new[np.ix_(rows, shift[j])] += c * P
        img = new
    return img


def _shell_true_coords(N: int):
    sh = enumerate_shell(N, "integral")
    return (sh.coords // 2).tolist()


def _coeff_bound(n: int, N: int) -> int:
    """Upper bound on any entry of the summed substitution matrix.

    Each substitution matrix entry is a coefficient of a product of n
    linear forms and is bounded by (sum |m_i|)^n; the shell sum multiplies
    that by the shell size.
    """
    coords = _shell_true_coords(N)
    if not coords:
        return 0
    width = max(sum(abs(c) for c in w) for w in coords)
    return len(coords) * width ** n


@lru_cache(maxsize=None)
def shell_monomial_matrix(n: int, N: int) -> np.ndarray:
    """Sum of the monomial substitution matrices over the norm-N shell; exact."""
    dtype = np.int64 if _coeff_bound(n, N) < 2 ** 62 else object
    total = None
    for w in _shell_true_coords(N):
        img = left_mul_monomial_matrix(n, tuple(w), dtype=dtype)
        total = img if total is None else total + img
    if total is None:
        nm = len(monomials(n)[0])
        total = np.zeros((nm, nm), dtype=dtype)
    total.setflags(write=False)
    return total


@lru_cache(maxsize=None)
def shell_monomial_matrix_float(n: int, N: int) -> np.ndarray:
    M = shell_monomial_matrix(n, N)
    return M.astype(float)


@dataclass(frozen=True)
class HeckeMatrix:
    """Exact matrix of 8 N^(n/2) T_N in the harmonic basis.

    ``entries / denom`` is the matrix of the unscaled operator
    f -> sum_{nr(m)=N} f(m x); T_N itself is that divided by 8 N^(n/2).
    ``denom`` is 1 whenever the unscaled matrix is integral.
    """

    n: int
    N: int
    entries: tuple
    denom: int

    @property
    def dim(self):
        return len(self.entries)

    def unscaled(self) -> np.ndarray:
        """Object array of the integer matrix ``denom * (8 N^(n/2) T_N)``."""
        return np.array([[v for v in row] for row in self.entries], dtype=object)

    def fraction_matrix(self):
        """Exact matrix of the unscaled operator sum_m L_m."""
        d = self.denom
        return [[Fraction(v, d) for v in row] for row in self.entries]

    def scale(self) -> Fraction:
        """T_N = scale * entries (requires n even or N a perfect square)."""
        return Fraction(1, 8 * self.denom * _int_pow_half(self.N, self.n))

    def scaled_float(self) -> np.ndarray:
        arr = np.array([[float(v) for v in row] for row in self.entries])
        return arr / (8.0 * self.denom * float(self.N) ** (self.n / 2))


def _int_pow_half(N: int, n: int) -> int:
    if n % 2 == 0:
        return N ** (n // 2)
    r = isqrt(N)
    if r * r != N:
        raise ValueError("N^(n/2) is not integral for odd n and non-square N")
    return r ** n


@lru_cache(maxsize=None)
def hecke_matrix(n: int, N: int) -> HeckeMatrix:
    """Exact Hecke matrix in the harmonic basis (columns = images of basis)."""
    if n < 0 or N < 1:
        raise ValueError("need n >= 0 and N >= 1")
    hb = harmonic_basis(n)
    mons, idx = monomials(n)
    nm = len(mons)
    M = shell_monomial_matrix(n, N)
    diag_f = [fischer_dot(p, p) for p in hb.basis]
    cols = []
    for p in hb.basis:
        w = [0] * nm
        for a, c in p.coeffs.items():
            row = M[idx[a]]
            c = int(c)
            for t in range(nm):
                v = row[t]
                if v:
                    w[t] += c * int(v)
        col = []
        for i, q in enumerate(hb.basis):
            num = 0
            for a, c in q.coeffs.items():
                v = w[idx[a]]
                if v:
                    num += _multifact(a) * c * v
            col.append(Fraction(num, diag_f[i]))
        cols.append(col)
    d = 1
    for col in cols:
        for v in col:
            d = d * v.denominator // math.gcd(d, v.denominator)
    entries = tuple(
        tuple(int(cols[j][i] * d) for j in range(hb.dim)) for i in range(hb.dim)
    )
    return HeckeMatrix(n, N, entries, d)


@lru_cache(maxsize=None)
def hecke_matrix_float(n: int, N: int) -> np.ndarray:
    """Float matrix of the scaled operator T_N (harmonic-basis coordinates)."""
    hb = harmonic_basis(n)
    B = poly.basis_coeff_matrix(hb)
    mons, _ = monomials(n)
    wts = np.array([float(_multifact(a)) for a in mons])
    diag_f = np.array([float(fischer_dot(p, p)) for p in hb.basis])
    P = (B * wts[None, :]) / diag_f[:, None]
    M = shell_monomial_matrix_float(n, N)
    W = B @ M  # W[j] = monomial coefficients of sum_m b_j(m x)
    A = P @ W.T
    return A / (8.0 * float(N) ** (n / 2))


def t1_vanishing(n: int) -> bool:
    """Exact vanishing of the T_1 matrix; true for every odd n."""
    hm = hecke_matrix(n, 1)
    return all(v == 0 for row in hm.entries for v in row)


def selfadjoint_check(n: int, N: int) -> bool:
    """Exact self-adjointness test G A = A^T G against the Gram matrix."""
    hb = harmonic_basis(n)
    A = hecke_matrix(n, N).entries
    g = hb.gram
    dim = hb.dim
    for i in range(dim):
        for j in range(dim):
            if g[i][i] * A[i][j] != g[j][j] * A[j][i]:
                return False
    return True


def _obj_matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return A @ B


def hecke_relations_check(n: int, primes=(3, 5), alpha_max: int = 2,
                          extra_commuting=()) -> dict:
    """Exact integer-matrix verification of the Hecke algebra relations.

    Checks multiplicativity T_M T_N = T_{MN} for distinct odd primes,
    the recursion T_{p^2} = T_p^2 - p T_1, and vanishing commutators over
    the primes, their squares, products, and ``extra_commuting``.
    """
    if n % 2:
        raise ValueError("relations are checked on even n")
    report = {}
    primes = tuple(sorted(primes))

    def U(N):
        hm = hecke_matrix(n, N)
        if hm.denom != 1:
            # unscaled matrix should be integral; fall back to cleared entries
            report.setdefault("nonintegral", []).append((N, hm.denom))
        return hm.unscaled(), hm.denom

    mats = {}
    Ns = set([1]) | set(primes) | {p * p for p in primes} | set(extra_commuting)
    for p in primes:
        for q in primes:
            if p < q:
                Ns.add(p * q)
    for N in sorted(Ns):
        mats[N] = U(N)

    def TN(N):
        # exact Fraction matrix of T_N
        E, d = mats[N]
        s = Fraction(1, 8 * d * N ** (n // 2))
        return E, s

    for p in primes:
        for q in primes:
            if p >= q:
                continue
            Ep, sp = TN(p)
            Eq, sq = TN(q)
            Epq, spq = TN(p * q)
            lhs = _obj_matmul(Ep, Eq)
            # sp*sq*lhs == spq*Epq  <=>  cross-multiplied integers agree
            c = sp * sq / spq
            ok = bool(np.all(lhs * c.numerator == Epq * c.denominator))
            report[f"T{p}*T{q}=T{p*q}"] = ok

    for p in primes:
        if alpha_max < 2:
            continue
        Ep, sp = TN(p)
        Ep2, sp2 = TN(p * p)
        E1, s1 = TN(1)
        lhs = _obj_matmul(Ep, Ep)
        # T_{p^2} = T_p^2 - p T_1
        c2 = sp * sp / sp2
        c1 = p * s1 / sp2
        ok = bool(np.all(Ep2 * (c2.denominator * c1.denominator)
                         == lhs * (c2.numerator * c1.denominator)
                         - E1 * (c1.numerator * c2.denominator)))
        report[f"T{p * p}=T{p}^2-{p}*T1"] = ok

    keys = sorted(mats)
    for a in range(len(keys)):
        for b in range(a + 1, len(keys)):
            M1, _ = mats[keys[a]]
            M2, _ = mats[keys[b]]
            ok = bool(np.all(_obj_matmul(M1, M2) == _obj_matmul(M2, M1)))
            report[f"[T{keys[a]},T{keys[b]}]=0"] = ok

    report["all_pass"] = all(v for k, v in report.items()
                             if isinstance(v, bool))
    return report


# ---------------------------------------------------------------------------
# joint spectral decomposition


@dataclass(frozen=True)
class EigenSpace:
    """One joint eigenspace V_lambda with its eigenvalue table."""

    lams: dict
    vectors: np.ndarray  # (dim, multiplicity), coordinates in the rational basis
    t1_flag: int

    @property
    def multiplicity(self):
        return self.vectors.shape[1]


@dataclass(frozen=True)
class SpectralDecomposition:
    n: int
    primes: tuple
    extras: tuple
    seed: int
    spaces: tuple

    @property
    def dim(self):
        return sum(s.multiplicity for s in self.spaces)

    def all_vectors(self):
        return np.concatenate([s.vectors for s in self.spaces], axis=1)

    def eigenvalue_of(self, space: EigenSpace, N: int) -> float:
        lam = space.lams.get(N)
        if lam is None:
            raise KeyError(
                f"eigenvalue for N={N} not computed; add it to even_extras")
        return lam


def _whitened_operator(n: int, N: int, sqrt_g: np.ndarray) -> np.ndarray:
    T = hecke_matrix_float(n, N)
    S = (sqrt_g[:, None] * T) / sqrt_g[None, :]
    asym = np.abs(S - S.T).max() / max(np.abs(S).max(), 1e-30)
    if asym > 1e-9:
        raise DegeneracyError(f"whitened T_{N} not symmetric (asym {asym:.2e})")
    return 0.5 * (S + S.T)


def joint_eigenspaces(n: int, primes=(3, 5), even_extras=(), seed: int = 0,
                      group_tol: float = 1e-7) -> SpectralDecomposition:
    """Simultaneous diagonalisation of the odd Hecke operators.

    A fixed-seed random integer combination of the whitened prime operators
    is diagonalised; eigenvectors are validated per operator by residual and
    grouped into V_lambda by matching eigenvalue tables.
    """
    if n % 2:
        raise ValueError("joint decomposition is computed for even n")
    if not primes:
        raise ValueError("need at least one odd prime")
    hb = harmonic_basis(n)
    dim = hb.dim
    sqrt_g = np.sqrt(np.array([float(hb.gram[i][i]) for i in range(dim)]))

    Ns = sorted(set(primes) | set(even_extras) | {1})
    ops = {N: _whitened_operator(n, N, sqrt_g) for N in Ns}

    rng = np.random.default_rng(seed)
    coeffs = rng.integers(1, 1000, size=len(primes))
    combo = sum(int(c) * ops[p] for c, p in zip(coeffs, primes))
    _, vecs = np.linalg.eigh(combo)

    tables = {}
    for N in Ns:
        S = ops[N]
        SV = S @ vecs
        lam = np.einsum("ij,ij->j", vecs, SV)
        resid = np.linalg.norm(SV - vecs * lam[None, :], axis=0)
        tol = 1e-9 * max(np.linalg.norm(S), 1.0)
        if resid.max() > tol:
            raise DegeneracyError(
                f"n={n} N={N}: residual {resid.max():.3e} exceeds {tol:.3e}; "
                f"re-draw with a different seed")
        tables[N] = lam

    # group eigenvectors whose prime tables agree within tolerance
    order = np.lexsort(tuple(tables[p] for p in reversed(primes)))
    groups = []
    for j in order:
        placed = False
        for g in groups:
            r = g[0]
            if all(abs(tables[p][j] - tables[p][r]) <= group_tol * (1 + abs(tables[p][r]))
                   for p in primes):
                g.append(j)
                placed = True
                break
        if placed is False:
            groups.append([j])

    spaces = []
    for g in groups:
        idxs = np.array(g)
        lams = {N: float(np.mean(tables[N][idxs])) for N in Ns}
        t1 = 1 if lams[1] > 0.5 else 0
        coords = vecs[:, idxs] / sqrt_g[:, None]
        spaces.append(EigenSpace(lams=lams, vectors=coords, t1_flag=t1))
    dec = SpectralDecomposition(n=n, primes=tuple(primes),
                                extras=tuple(even_extras), seed=seed,
                                spaces=tuple(spaces))
    assert dec.dim == dim
    return dec


def decompose(n: int, primes=(3, 5), even_extras=(), seed: int = 0,
              retries: int = 5) -> SpectralDecomposition:
    """joint_eigenspaces with automatic seed re-draws on degeneracy."""
    last = None
    for s in range(seed, seed + retries):
        try:
            return joint_eigenspaces(n, primes, even_extras, seed=s)
        except DegeneracyError as exc:
            last = exc
    raise last
