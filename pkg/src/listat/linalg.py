"""Exact linear algebra over the rationals."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from .scalar import InexactError, exact_sqrt


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form with left-to-right pivot order.

    Returns the nonzero rows and the pivot column of each.
    """
    mat = [[Fraction(x) for x in row] for row in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][col] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][col]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : A x = 0}``, one vector per free column (free entry 1)."""
    reduced, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def primitive(v: Sequence[Fraction]) -> list[Fraction]:
    """Scale to coprime integers with a positive leading entry."""
    v = [Fraction(x) for x in v]
    nz = [x for x in v if x != 0]
    if not nz:
        return v
    den = math.lcm(*(x.denominator for x in nz))
    ints = [int(x * den) for x in v]
    g = math.gcd(*ints)
    sign = 1 if nz[0] > 0 else -1
    return [Fraction(sign * x // g) for x in ints]


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One solution of ``a x = b`` or None when inconsistent."""
    ncols = len(a[0]) if a else 0
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    reduced, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(reduced, pivots):
        x[p] = row[-1]
    return x


def inverse(m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    aug = [[Fraction(m[i, j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    reduced, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        out[i, :] = reduced[i][n:]
    return out


def cholesky(g: np.ndarray) -> np.ndarray:
    """Lower-triangular L with ``L L^T = g``.

    Works in both modes; exact mode requires every pivot to be a rational
    square and raises InexactError otherwise.  Raises ValueError when g is
    not positive definite.
    """
    n = g.shape[0]
    exact = g.dtype == object
    L = np.empty((n, n), dtype=object) if exact else np.zeros((n, n))
    if exact:
        L.fill(Fraction(0))
    for j in range(n):
        d = g[j, j] - sum((L[j, k] * L[j, k] for k in range(j)), Fraction(0) if exact else 0.0)
        if d <= 0:
            raise ValueError("Gram matrix is not positive definite")
        L[j, j] = exact_sqrt(d) if exact else math.sqrt(d)
        for i in range(j + 1, n):
            s = g[i, j] - sum((L[i, k] * L[j, k] for k in range(j)), Fraction(0) if exact else 0.0)
            L[i, j] = s / L[j, j]
    return L


def leading_minors_positive(g: np.ndarray) -> bool:
    """Positive definiteness via exact LDL^T pivots (no square roots)."""
    n = g.shape[0]
    m = [[Fraction(g[i, j]) for j in range(n)] for i in range(n)]
    for k in range(n):
        if m[k][k] <= 0:
            return False
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            for j in range(k, n):
                m[i][j] -= f * m[k][j]
    return True


def quadratic_extremum(q: np.ndarray, l: np.ndarray, c: Fraction):
    """Exact infimum of ``x^T q x + l.x + c`` over rational directions.

    Returns the minimum value when q is positive semidefinite and the
    minimum is attained, otherwise None.  q must be symmetric.
    """
    d = q.shape[0]
    if d == 0:
        return Fraction(c)
    Q = [[Fraction(q[i, j]) for j in range(d)] for i in range(d)]
    L = [Fraction(x) for x in l]
    c = Fraction(c)
    # complete the square one variable at a time
    active = list(range(d))
    while active:
        k = active[0]
        if Q[k][k] < 0:
            return None
        if Q[k][k] == 0:
            if any(Q[k][j] != 0 for j in active):
                return None
            if L[k] != 0:
                return None
            active.pop(0)
            continue
        a = Q[k][k]
        rest = active[1:]
        # x^T Q x + L x with x_k eliminated at its optimum
        b = {j: Q[k][j] for j in rest}
        lk = L[k]
        for i in rest:
            for j in rest:
                Q[i][j] -= b[i] * b[j] / a
            L[i] -= lk * b[i] / a
        c -= lk * lk / (4 * a)
        active = rest
    return c


def psd_lower_bound(q: np.ndarray, l: np.ndarray, c) -> Fraction | None:
    """Positive lower bound on ``|x^T q x + l.x + c|`` or None.

    The quadratic is certified nonvanishing when it is convex with a
    positive minimum or concave with a negative maximum.
    """
    lo = quadratic_extremum(q, l, c)
    if lo is not None and lo > 0:
        return lo
    neg = quadratic_extremum(-q, -np.asarray(l, dtype=object), -Fraction(c))
    if neg is not None and neg > 0:
        return neg
    return None


def rationalize(x: float, max_den: int = 10**6, tol: float = 1e-9) -> Fraction | None:
    q = Fraction(x).limit_denominator(max_den)
    return q if abs(float(q) - x) <= tol * max(1.0, abs(x)) else None


def is_rational_square(q: Fraction) -> bool:
    try:
        exact_sqrt(q)
    except InexactError:
        return False
    return True
