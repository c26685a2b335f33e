"""Symbolic dynamics of a geometric type: transition matrices, Perron data, entropy, word counts."""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy

from .errors import ReducibleError
from .field import NumberField

EXACT_MAX_DEGREE = 4


@dataclass(frozen=True)
class TransitionMatrix:
    M: tuple
    Mu: tuple

    @property
    def n(self):
        return len(self.M)

    def as_array(self, signed=False):
        return np.array(self.Mu if signed else self.M, dtype=np.int64)


def transition_matrix(g):
    n = g.n
    M = [[0] * n for _ in range(n)]
    Mu = [[0] * n for _ in range(n)]
    for a, b in g.phi.items():
        M[a.rect - 1][b.rect - 1] += 1
        Mu[a.rect - 1][b.rect - 1] += g.u[a]
    return TransitionMatrix(tuple(map(tuple, M)), tuple(map(tuple, Mu)))


@dataclass(frozen=True)
class Structure:
    irreducible: bool
    primitive: bool


def _bool_power_positive(A, k):
    """True iff A^k (boolean) is entrywise positive."""
    n = A.shape[0]
    result = np.eye(n, dtype=bool)
    base = A.astype(bool)
    while k:
        if k & 1:
            result = (result.astype(np.int64) @ base.astype(np.int64)) > 0
        base = (base.astype(np.int64) @ base.astype(np.int64)) > 0
        k >>= 1
    return bool(result.all())


def _matrix_structure(M):
    A = np.array(M, dtype=np.int64) > 0
    n = A.shape[0]
    reach = _bool_power_positive(A | np.eye(n, dtype=bool), max(n - 1, 1))
    primitive = reach and _bool_power_positive(A, n * n - 2 * n + 2)
    return Structure(reach, primitive)


def structure(g):
    return _matrix_structure(transition_matrix(g).M)


def charpoly(M):
    """Integer coefficients of det(xI - M), highest degree first."""
    x = sympy.Symbol("x")
    p = sympy.Matrix(M).charpoly(x)
    return [int(c) for c in p.all_coeffs()]


def spectral_radius(M):
    """Largest modulus of an eigenvalue.

    Roots are taken factor by factor over Q: irreducible factors have simple
    roots, so np.roots plus a Newton step is accurate even when the
    characteristic polynomial has repeated roots.
    """
    x = sympy.Symbol("x")
    rho = 0.0
    for fac, _ in sympy.factor_list(sympy.Poly(charpoly(M), x))[1]:
        coeffs = [int(c) for c in fac.all_coeffs()]
        if len(coeffs) < 2:
            continue
        p = np.poly1d(coeffs)
        dp = p.deriv()
        for r in np.roots(np.array(coeffs, dtype=float)):
            if abs(r.imag) < 1e-9 * max(1.0, abs(r)):
                r = r.real
                if dp(r) != 0:
                    r = r - p(r) / dp(r)
            rho = max(rho, float(abs(r)))
    return rho


def entropy(g):
    return math.log(spectral_radius(transition_matrix(g).M))


def count_closed_words(g, m):
    """trace(M^m), exact integer arithmetic."""
    M = sympy.Matrix(transition_matrix(g).M)
    return int((M ** m).trace())


def count_closed_words_bruteforce(g, m):
    """Enumerate closed edge sequences e_1..e_m of the transition digraph directly."""
    edges = {}
    for a, b in g.phi.items():
        edges.setdefault(a.rect, []).append(b.rect)
    count = 0

    def walk(start, here, steps):
        nonlocal count
        if steps == m:
            count += here == start
            return
        for nxt in edges.get(here, ()):
            walk(start, nxt, steps + 1)

    for i in range(1, g.n + 1):
        walk(i, i, 0)
    return count


@dataclass(frozen=True)
class PerronData:
    lam: object
    w: tuple
    t: tuple
    exact: bool
    field: object = None

    def floats(self):
        return float(self.lam), [float(x) for x in self.w], [float(x) for x in self.t]


def perron_field(M):
    """Number field generated by the spectral radius of an irreducible M, or None if its degree is too large."""
    coeffs = charpoly(M)
    x = sympy.Symbol("x")
    rho = spectral_radius(M)
    best = None
    for fac, _ in sympy.factor_list(sympy.Poly(coeffs, x))[1]:
        fc = [float(c) for c in fac.all_coeffs()]
        roots = np.roots(fc) if len(fc) > 1 else []
        if not len(roots):
            continue
        dist = min(abs(r - rho) for r in roots)
        if best is None or dist < best[0]:
            best = (dist, fac)
    fac = best[1]
    if fac.degree() > EXACT_MAX_DEGREE:
        return None
    low_first = [Fraction(int(c)) for c in reversed(fac.all_coeffs())]
    return NumberField(low_first)


def _kernel_vector(rows, K):
    """A nonzero vector in the kernel of a square matrix over K with 1-dim kernel."""
    A = [list(r) for r in rows]
    n = len(A)
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, n) if not A[i][col].is_zero()), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = A[r][col].inverse()
        A[r] = [x * inv for x in A[r]]
        for i in range(n):
            if i != r and not A[i][col].is_zero():
                f = A[i][col]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if len(free) != 1:
        raise ReducibleError(f"Perron eigenspace has dimension {len(free)}")
    f = free[0]
    vec = [K.zero() for _ in range(n)]
    vec[f] = K.one()
    for row, col in enumerate(pivots):
        vec[col] = -A[row][f]
    return vec


def perron(g):
    M = transition_matrix(g).M
    if not _matrix_structure(M).irreducible:
        raise ReducibleError("transition matrix is reducible")
    return perron_of_matrix(M)


def perron_of_matrix(M):
    n = len(M)
    K = perron_field(M)
    if K is not None:
        lam = K.gen
        right = [[K(M[i][j]) - (lam if i == j else 0) for j in range(n)] for i in range(n)]
        left = [[K(M[j][i]) - (lam if i == j else 0) for j in range(n)] for i in range(n)]
        t = _kernel_vector(right, K)
        w = _kernel_vector(left, K)
        st, sw = sum(t, K.zero()), sum(w, K.zero())
        t = tuple(x / st for x in t)
        w = tuple(x / sw for x in w)
        if any(x.sign() <= 0 for x in t + w):
            raise ReducibleError("Perron vector not positive")
        return PerronData(lam, w, t, True, K)
    A = np.array(M, dtype=float)
    vals, vecs = np.linalg.eig(A)
    k = int(np.argmax(vals.real))
    lam = float(vals[k].real)
    t = np.abs(vecs[:, k].real)
    t = t / t.sum()
    lvals, lvecs = np.linalg.eig(A.T)
    k = int(np.argmax(lvals.real))
    w = np.abs(lvecs[:, k].real)
    w = w / w.sum()
    residual = np.max(np.abs(A @ t - lam * t))
    if residual >= 1e-10:
        raise ArithmeticError(f"Perron residual {residual} too large")
    return PerronData(lam, tuple(map(float, w)), tuple(map(float, t)), False, None)
