"""Conjugate symmetric subspaces, dually flat searches and isotropy actions."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from . import linalg
from .algebra import FAMILIES, LieAlgebra, UnsupportedError, family_of
from .connections import (difference_tensor, levi_civita, nabla_cubic,
                          statistical_connection)
from .curvature import curvature
from .scalar import (InexactError, as_float, einsum, eye, exact_sqrt, is_zero,
                     max_abs, resolve_eps, zeros)
from .symtensor import (CubicForm, OrthogonalMap, act_isotropy, cubic_from_polynomial,
                        distance, format_polynomial, monomials, polynomial_from_cubic)


# conjugate symmetric subspace -------------------------------------------------

def monomial_form(mono: tuple[int, ...], n: int) -> CubicForm:
    return cubic_from_polynomial({mono: 1}, n)


def polynomial_vector(C: CubicForm) -> list:
    """Polynomial coefficients of C in monomial order."""
    view = polynomial_from_cubic(C)
    zero = Fraction(0) if C.exact else 0.0
    return [view.get(m, zero) for m in monomials(C.n)]


def form_from_vector(vec: Sequence, n: int) -> CubicForm:
    exact = all(isinstance(v, (Fraction, int)) for v in vec)
    return cubic_from_polynomial(dict(zip(monomials(n), vec)), n, exact)


def cs_constraint_rows(alg: LieAlgebra) -> list[list[Fraction]]:
    """Linear conditions on polynomial coefficients for total symmetry of nabla C.

    One row per entry ``(i <= j, k < t)`` of ``T_ijkt - T_ijtk``; zero and
    repeated rows are dropped.
    """
    n = alg.n
    lc = levi_civita(alg)
    monos = monomials(n)
    cols = []
    for mono in monos:
        T = nabla_cubic(lc, monomial_form(mono, n)).t
        cols.append(T - T.transpose(0, 1, 3, 2))
    rows, seen = [], set()
    for i in range(n):
        for j in range(i, n):
            for k in range(n):
                for t in range(k + 1, n):
                    row = [col[i, j, k, t] for col in cols]
                    if all(v == 0 for v in row):
                        continue
                    key = tuple(linalg.primitive(row))
                    if key in seen:
                        continue
                    seen.add(key)
                    rows.append(list(key))
    return rows


@dataclass(frozen=True)
class CSBasis:
    """Basis of the conjugate symmetric cubic forms.

    ``forms`` is the presented basis: the family's reference generators
    when the algebra is a built-in family and the spans agree exactly,
    otherwise ``echelon``, the reduced echelon basis scaled to primitive
    integer coefficients.
    """

    n: int
    forms: tuple[CubicForm, ...]
    echelon: tuple[CubicForm, ...]
    aligned: bool = False

    @property
    def dimension(self) -> int:
        return len(self.forms)

    def polynomials(self) -> list[str]:
        return [format_polynomial(polynomial_from_cubic(C)) for C in self.forms]

    def combination(self, coeffs: Sequence) -> CubicForm:
        if len(coeffs) != self.dimension:
            raise ValueError("wrong number of coefficients")
        out = CubicForm.zero(self.n, all(f.exact for f in self.forms))
        for c, f in zip(coeffs, self.forms):
            out = out + f * c
        return out


def cs_subspace(alg: LieAlgebra) -> CSBasis:
    """Exact nullspace of the conjugate symmetry conditions."""
    if not alg.exact:
        raise ValueError("cs_subspace needs exact mode; rank decisions cannot depend on a tolerance")
    if not alg.orthonormal:
        raise ValueError("cs_subspace needs an orthonormal frame")
    n = alg.n
    rows = cs_constraint_rows(alg)
    null = linalg.nullspace(rows, len(monomials(n)))
    if null:
        reduced, _ = linalg.rref(null)
        echelon = tuple(form_from_vector(linalg.primitive(v), n) for v in reduced)
    else:
        echelon = ()
    fam = family_of(alg)
    if fam is not None:
        gens = reference_generators(fam, n)
        if same_span(gens, echelon):
            return CSBasis(n, tuple(gens), echelon, True)
    return CSBasis(n, echelon, echelon, False)


def reference_generators(family: str, n: int) -> list[CubicForm]:
    """Closed-form spanning sets of the conjugate symmetric forms.

    rhn: ``4x1^3 + 6 sum_{i>=2} x1 xi^2``.  Heisenberg families:
    ``(x1^2 + x2^2 + x3^2) xk`` for k >= 4 and all cubic monomials in
    x4..xn.  abelian: all cubic monomials.
    """
    if family == "abelian":
        return [monomial_form(m, n) for m in monomials(n)]
    if family == "rhn":
        view = {(1, 1, 1): 4}
        view.update({(1, i, i): 6 for i in range(2, n + 1)})
        return [cubic_from_polynomial(view, n)]
    if family in ("heisenberg3", "heisenberg_product"):
        gens = []
        for k in range(4, n + 1):
            gens.append(cubic_from_polynomial({(1, 1, k): 1, (2, 2, k): 1, (3, 3, k): 1}, n))
        for c in itertools.combinations_with_replacement(range(4, n + 1), 3):
            gens.append(monomial_form(c, n))
        return gens
    raise ValueError(f"unknown family {family!r}")


def same_span(a: Sequence[CubicForm], b: Sequence[CubicForm]) -> bool:
    ra = linalg.rank([polynomial_vector(f) for f in a]) if a else 0
    rb = linalg.rank([polynomial_vector(f) for f in b]) if b else 0
    rab = linalg.rank([polynomial_vector(f) for f in (*a, *b)]) if (a or b) else 0
    return ra == rb == rab


def span_residual(C: CubicForm, gens: Sequence[CubicForm]):
    """Max-norm residual of the orthogonal projection of C onto span(gens).

    Computed in polynomial-coefficient coordinates, exactly when all inputs
    are exact.
    """
    b = np.array(polynomial_vector(C), dtype=object if C.exact else float)
    if not gens:
        return max_abs(b)
    A = np.array([polynomial_vector(g) for g in gens], dtype=object).T
    exact = C.exact and all(g.exact for g in gens)
    if not exact:
        Af, bf = as_float(A), as_float(b)
        x, *_ = np.linalg.lstsq(Af, bf, rcond=None)
        return float(np.max(np.abs(Af @ x - bf)))
    reduced, piv = linalg.rref(A.T.tolist())
    basis = np.array(reduced, dtype=object).T
    gram = einsum("ia,ib->ab", basis, basis)
    rhs = einsum("ia,i->a", basis, b)
    x = linalg.solve(gram.tolist(), rhs.tolist())
    r = b - einsum("ia,a->i", basis, np.array(x, dtype=object))
    return max_abs(r)


# dually flat structures ----------------------------------------------------------

def df_check(alg: LieAlgebra, C: CubicForm, eps: float | None = None) -> bool:
    """Whether the statistical connection of (alg, C) is flat."""
    if alg.exact != C.exact:
        alg = alg if not alg.exact else alg.to_float()
        C = C if not C.exact else C.to_float()
    lc = levi_civita(alg)
    R = curvature(statistical_connection(lc, difference_tensor(C)), alg)
    return is_zero(max_abs(R.t), eps)


@dataclass(frozen=True)
class FamilyDescriptor:
    description: str
    sample: CubicForm | None = None


@dataclass
class DFSolutions:
    """Result of a dually flat search on the conjugate symmetric span."""

    cs_dimension: int
    forms: list[CubicForm] = field(default_factory=list)
    family: FamilyDescriptor | None = None
    lower_bound: Any = None
    method: str = ""
    orbits: list[list[int]] = field(default_factory=list)

    @property
    def empty(self) -> bool:
        return not self.forms and self.family is None


@dataclass(frozen=True)
class DFOptions:
    grid: tuple[float, ...] = (-1.5, -0.5, 0.5, 1.5)
    newton_iters: int = 60
    dedupe_tol: float = 1e-6
    root_tol: float = 1e-10
    max_dimension: int = 4
    force_newton: bool = False


ABELIAN_FAMILY = "diagonal forms, see abelian_df_normal_form"


def _entry_index(n: int) -> list[tuple[int, int, int, int]]:
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return [(*p, *q) for a, p in enumerate(pairs) for q in pairs[a:]]


def curvature_quadratic(alg: LieAlgebra, basis: Sequence[CubicForm]):
    """Curvature of ``sum t_a basis_a`` as ``R0 + L t + t^T Q t`` per entry.

    Returns arrays ``R0 (N,)``, ``L (N, d)`` and symmetric ``Q (N, d, d)``
    over the entries ``(i<j, k<l, (i,j) <= (k,l))``, obtained exactly by
    polarization.
    """
    n, d = alg.n, len(basis)
    exact = alg.exact and all(b.exact for b in basis)
    lc = levi_civita(alg)
    idx = tuple(np.array(x) for x in zip(*_entry_index(n))) if n > 1 else None

    def R(C):
        if idx is None:
            return zeros((0,), exact)
        t = curvature(statistical_connection(lc, difference_tensor(C)), alg).t
        return t[idx]

    zero = CubicForm.zero(n, exact)
    r0 = R(zero)
    N = r0.shape[0]
    L = zeros((N, d), exact)
    Q = zeros((N, d, d), exact)
    half = Fraction(1, 2) if exact else 0.5
    plus = [R(b) for b in basis]
    minus = [R(-b) for b in basis]
    for a in range(d):
        L[:, a] = (plus[a] - minus[a]) * half
        Q[:, a, a] = (plus[a] + minus[a]) * half - r0
    for a in range(d):
        for b in range(a + 1, d):
            both = R(basis[a] + basis[b])
            q = (both - r0 - L[:, a] - L[:, b] - Q[:, a, a] - Q[:, b, b]) * half
            Q[:, a, b] = q
            Q[:, b, a] = q
    return r0, L, Q


def emptiness_certificate(r0, L, Q):
    """Largest certified lower bound on ``max |R|`` over the whole span, or None.

    An entry certifies emptiness when, as a quadratic in the coordinates,
    it is convex with a positive minimum or concave with a negative maximum.
    """
    best = None
    for e in range(r0.shape[0]):
        if all(v == 0 for v in Q[e].reshape(-1)) and all(v == 0 for v in L[e]):
            bound = abs(r0[e]) if r0[e] != 0 else None
        else:
            bound = linalg.psd_lower_bound(Q[e], L[e], r0[e])
        if bound is not None and (best is None or bound > best):
            best = bound
    return best


def _solve_line(alg, B: CubicForm, r0, L, Q, eps) -> tuple[list[CubicForm], bool]:
    """Roots of the entrywise quadratic ``r0 + L t + Q t^2``; flag for 'all t'."""
    l, q = L[:, 0], Q[:, 0, 0]
    nz = [e for e in range(r0.shape[0]) if r0[e] != 0 or l[e] != 0 or q[e] != 0]
    if not nz:
        return [], True
    e = max(nz, key=lambda i: (q[i] != 0, l[i] != 0))
    a, b, c = q[e], l[e], r0[e]
    cands: list = []
    if a != 0:
        disc = b * b - 4 * a * c
        if disc >= 0:
            try:
                s = exact_sqrt(disc)
                cands = [(-b - s) / (2 * a), (-b + s) / (2 * a)]
            except InexactError:
                s = math.sqrt(disc)
                cands = [(-float(b) - s) / (2 * float(a)), (-float(b) + s) / (2 * float(a))]
    elif b != 0:
        cands = [-c / b]
    sols = []
    for t in sorted(set(cands)):
        vals = r0 + l * t + q * t * t
        if isinstance(t, Fraction):
            ok = all(v == 0 for v in vals)
        else:
            ok = is_zero(max_abs(as_float(vals)), eps)
        if ok:
            sols.append(B * t)
    return sols, False


def _newton_roots(r0, L, Q, opts: DFOptions, eps):
    R0, Lf, Qf = as_float(r0), as_float(L), as_float(Q)
    d = Lf.shape[1]

    def F(t):
        return R0 + Lf @ t + np.einsum("eab,a,b->e", Qf, t, t)

    def J(t):
        return Lf + 2 * np.einsum("eab,b->ea", Qf, t)

    starts = [np.array(p, dtype=float) for p in itertools.product(opts.grid, repeat=d)]
    starts.sort(key=tuple)
    roots, deficient = [], []
    for t in starts:
        f = F(t)
        for _ in range(opts.newton_iters):
            nf = np.linalg.norm(f)
            if nf <= opts.root_tol:
                break
            step, *_ = np.linalg.lstsq(J(t), -f, rcond=None)
            lam = 1.0
            while lam > 1e-8:
                tn = t + lam * step
                fn = F(tn)
                if np.linalg.norm(fn) < nf:
                    break
                lam *= 0.5
            else:
                break
            t, f = tn, fn
        if np.max(np.abs(F(t)), initial=0.0) > opts.root_tol:
            continue
        sv = np.linalg.svd(J(t), compute_uv=False)
        rank = int(np.sum(sv > 1e-8 * max(1.0, sv.max(initial=0.0))))
        if any(np.max(np.abs(t - r)) <= opts.dedupe_tol for r in roots):
            continue
        roots.append(t)
        deficient.append(rank < d)
    return roots, deficient


def _exact_root(alg, basis, t, eps) -> CubicForm:
    coeffs = [linalg.rationalize(float(x)) for x in t]
    if all(c is not None for c in coeffs):
        C = CSBasis(alg.n, tuple(basis), tuple(basis)).combination(coeffs)
        if df_check(alg, C):
            return C
    out = CubicForm.zero(alg.n, False)
    for c, b in zip(t, basis):
        out = out + b.to_float() * float(c)
    return out


def orbit_classes(forms: Sequence[CubicForm], gens: "IsotropyGenerators | None",
                  tol: float) -> list[list[int]]:
    """Group solutions related by one generator step (union-find)."""
    parent = list(range(len(forms)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    if gens is not None:
        for i, f in enumerate(forms):
            for h in gens.maps:
                image = act_isotropy(1, h, f)
                for j, g in enumerate(forms):
                    if float(distance(image, g)) <= tol:
                        parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(len(forms)):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def df_solutions(alg: LieAlgebra, opts: DFOptions | None = None,
                 eps: float | None = None) -> DFSolutions:
    """Dually flat cubic forms inside the conjugate symmetric span.

    Strategy by CS dimension d: abelian algebras return a family
    descriptor; d = 0 tests C = 0; an exact emptiness certificate is tried
    next; d = 1 solves the line exactly; d <= 4 runs a multi-start damped
    Gauss-Newton search; larger d raises UnsupportedError.
    """
    opts = opts or DFOptions()
    eps = resolve_eps(eps)
    basis = list(cs_subspace(alg).forms)
    d = len(basis)
    n = alg.n
    if alg.is_abelian() and d > 0:
        return DFSolutions(d, family=FamilyDescriptor(ABELIAN_FAMILY), method="abelian")
    if d == 0:
        zero = CubicForm.zero(n)
        if df_check(alg, zero):
            return DFSolutions(0, [zero], method="zero")
        lc = levi_civita(alg)
        bound = max_abs(curvature(lc, alg).t)
        return DFSolutions(0, lower_bound=bound, method="zero")
    r0, L, Q = curvature_quadratic(alg, basis)
    bound = emptiness_certificate(r0, L, Q)
    if bound is not None:
        return DFSolutions(d, lower_bound=bound, method="certificate")
    fam = family_of(alg)
    gens = isotropy_generators(fam, n) if fam in FAMILIES else None
    if d == 1 and not opts.force_newton:
        sols, whole = _solve_line(alg, basis[0], r0, L, Q, eps)
        if whole:
            return DFSolutions(d, family=FamilyDescriptor("every multiple of the CS generator", basis[0]),
                               method="line")
        return DFSolutions(d, sols, method="line", orbits=orbit_classes(sols, gens, opts.dedupe_tol))
    if d > opts.max_dimension:
        raise UnsupportedError(
            f"CS dimension {d} exceeds the search limit {opts.max_dimension}; "
            "test candidate forms with df_check instead")
    roots, deficient = _newton_roots(r0, L, Q, opts, eps)
    forms = [_exact_root(alg, basis, t, eps) for t in roots]
    if any(deficient):
        # report one exact representative when there is one, not the raw samples
        flagged = [f for f, bad in zip(forms, deficient) if bad]
        sample = next((f for f in flagged if f.exact), flagged[0])
        return DFSolutions(d, family=FamilyDescriptor("non-isolated solution family", sample),
                           method="newton")
    order = sorted(range(len(forms)), key=lambda i: [float(x) for x in polynomial_vector(forms[i])])
    forms = [forms[i] for i in order]
    return DFSolutions(d, forms, method="newton", orbits=orbit_classes(forms, gens, opts.dedupe_tol))


# abelian normal form --------------------------------------------------------------

@dataclass(frozen=True)
class DiagonalSpectrum:
    values: tuple

    def to_cubic(self, exact: bool = True) -> CubicForm:
        n = len(self.values)
        return cubic_from_polynomial({(i + 1,) * 3: v for i, v in enumerate(self.values)}, n, exact)

    def is_canonical(self) -> bool:
        v = self.values
        return all(x >= 0 for x in v) and all(v[i] >= v[i + 1] for i in range(len(v) - 1))


def canonicalize_v(lam: Sequence) -> DiagonalSpectrum:
    """Representative of a diagonal form modulo signed permutations."""
    return DiagonalSpectrum(tuple(sorted((abs(x) for x in lam), reverse=True)))


CLUSTER_TOL = 1e-7


def _clusters(w: np.ndarray, tol: float) -> list[list[int]]:
    order = np.argsort(w)
    groups = [[int(order[0])]]
    for a, b in zip(order[:-1], order[1:]):
        if w[b] - w[a] > tol:
            groups.append([])
        groups[-1].append(int(b))
    return groups


def _split_float(mats, basis):
    if basis.shape[1] <= 1:
        return [basis]
    for M in mats:
        Mr = basis.T @ M @ basis
        w, v = np.linalg.eigh((Mr + Mr.T) / 2)
        groups = _clusters(w, CLUSTER_TOL)
        if len(groups) > 1:
            out = []
            for g in groups:
                out += _split_float(mats, basis @ v[:, g])
            return out
    return [basis]


def _split_exact(mats, basis):
    import sympy

    if basis.shape[1] <= 1:
        return [basis]
    for M in mats:
        gram = basis.T * basis
        Mr = gram.inv() * basis.T * M * basis
        if Mr.is_diagonal() and len(set(Mr.diagonal())) == 1:
            continue
        out = []
        for val, _, vecs in Mr.eigenvects():
            if not val.is_Rational:
                raise InexactError("irrational joint eigenvalue")
            sub = basis * sympy.Matrix.hstack(*vecs)
            out += _split_exact(mats, sub)
        return out
    return [basis]


def _lambda_abs_exact(C: CubicForm, v) -> Fraction | float:
    vec = np.array([Fraction(int(x.p), int(x.q)) for x in v], dtype=object)
    cube = C(vec, vec, vec)
    sq = einsum("i,i->", vec, vec)[()]
    lam2 = cube * cube / (sq ** 3)
    try:
        return exact_sqrt(lam2)
    except InexactError:
        return math.sqrt(lam2)


def abelian_df_normal_form(C: CubicForm, eps: float | None = None) -> DiagonalSpectrum | None:
    """Canonical diagonal spectrum of a dually flat form on an abelian algebra.

    Returns None when the difference-tensor matrices do not commute.
    Exact inputs use exact eigenvectors when all joint eigenvalues are
    rational and fall back to floating point otherwise.
    """
    K = difference_tensor(C)
    mats = K.matrices
    n = C.n
    for u in range(n):
        for v in range(u + 1, n):
            comm = einsum("ij,jk->ik", mats[u], mats[v]) - einsum("ij,jk->ik", mats[v], mats[u])
            if not is_zero(max_abs(comm), eps):
                return None
    if C.exact:
        import sympy

        try:
            smats = [sympy.Matrix(n, n, [sympy.Rational(x.numerator, x.denominator)
                                         for x in m.reshape(-1)]) for m in mats]
            spaces = _split_exact(smats, sympy.eye(n))
            lam: list = []
            for B in spaces:
                if B.shape[1] == 1:
                    lam.append(_lambda_abs_exact(C, B[:, 0]))
                else:
                    lam.extend([Fraction(0)] * B.shape[1])
            return canonicalize_v(lam)
        except InexactError:
            C = C.to_float()
    fm = [as_float(m) for m in mats]
    spaces = _split_float(fm, np.eye(n))
    lam = []
    for B in spaces:
        if B.shape[1] == 1:
            v = B[:, 0]
            lam.append(float(np.einsum("ijk,i,j,k->", as_float(C.c), v, v, v)))
        else:
            lam.extend([0.0] * B.shape[1])
    return canonicalize_v(lam)


def spectrum_oracle(C: CubicForm) -> list[float]:
    """Sorted ``|lambda|`` from the eigenvalues of ``sum_u C_u C_u``.

    For ``C = sum lambda_i y_i^3`` in an orthonormal basis that matrix has
    eigenvalues ``lambda_i^2``.
    """
    c = as_float(C.c)
    M = np.einsum("uij,ujk->ik", c, c)
    w = np.linalg.eigvalsh((M + M.T) / 2)
    return sorted((math.sqrt(max(x, 0.0)) for x in w), reverse=True)


# isotropy ------------------------------------------------------------------------

@dataclass(frozen=True)
class IsotropyGenerators:
    family: str
    maps: tuple[OrthogonalMap, ...]
    scaling_allowed: bool

    def supported_on(self, block) -> "IsotropyGenerators":
        """The generators that act as the identity outside the 0-based indices in ``block``."""
        inside = sorted(set(block))
        outside = [i for i in range(self.maps[0].n) if i not in inside] if self.maps else []
        # an orthogonal matrix with identity rows outside the block also has identity columns there
        keep = tuple(h for h in self.maps
                     if all(h.h[i, j] == (i == j) for i in outside for j in range(h.n)))
        return IsotropyGenerators(self.family, keep, self.scaling_allowed)


def _embed(n: int, block: np.ndarray, offset: int, exact: bool) -> np.ndarray:
    h = eye(n, exact)
    k = block.shape[0]
    h[offset:offset + k, offset:offset + k] = block
    return h


def _orthogonal_block_generators(k: int, exact: bool) -> list[np.ndarray]:
    """Generators of O(k): adjacent transpositions, a sign flip, plane rotations."""
    one = Fraction(1) if exact else 1.0
    zero = Fraction(0) if exact else 0.0
    out = []
    if k >= 1:
        s = eye(k, exact)
        s[0, 0] = -one
        out.append(s)
    for i in range(k - 1):
        p = eye(k, exact)
        p[i, i] = p[i + 1, i + 1] = zero
        p[i, i + 1] = p[i + 1, i] = one
        out.append(p)
    if k >= 2:
        c, s = (Fraction(3, 5), Fraction(4, 5)) if exact else (math.cos(1.0), math.sin(1.0))
        for i in range(k - 1):
            r = eye(k, exact)
            r[i, i], r[i, i + 1], r[i + 1, i], r[i + 1, i + 1] = c, -s, s, c
            out.append(r)
    return out


def isotropy_generators(family: str, n: int, exact: bool = True) -> IsotropyGenerators:
    """Orthogonal automorphisms generating the isotropy group of a built-in family."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    mats: list[np.ndarray] = []
    if family == "abelian":
        mats = _orthogonal_block_generators(n, exact)
        return IsotropyGenerators(family, tuple(OrthogonalMap(m) for m in mats), True)
    if family == "rhn":
        mats = [_embed(n, b, 1, exact) for b in _orthogonal_block_generators(n - 1, exact)]
    else:
        one = Fraction(1) if exact else 1.0
        for b in _orthogonal_block_generators(2, exact):
            h = _embed(n, b, 0, exact)
            det = b[0, 0] * b[1, 1] - b[0, 1] * b[1, 0]
            h[2, 2] = det * one
            mats.append(h)
        mats += [_embed(n, b, 3, exact) for b in _orthogonal_block_generators(n - 3, exact)]
    return IsotropyGenerators(family, tuple(OrthogonalMap(m) for m in mats), False)


def automorphism_defect(alg: LieAlgebra, h: OrthogonalMap | np.ndarray):
    """``max |h[e_i, e_j] - [h e_i, h e_j]|``."""
    hm = h.h if isinstance(h, OrthogonalMap) else np.asarray(h)
    lhs = einsum("ijm,km->ijk", alg.a, hm)
    rhs = einsum("pi,qj,pqk->ijk", hm, hm, alg.a)
    return max_abs(lhs - rhs)


def invariance_defect(C: CubicForm, gens: IsotropyGenerators):
    """``max_h max |h.C - C|`` over the generators."""
    worst = Fraction(0) if C.exact else 0.0
    for h in gens.maps:
        d = distance(act_isotropy(1, h, C), C)
        worst = d if d > worst else worst
    return worst
