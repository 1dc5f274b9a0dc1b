"""Symmetric tensors of degree 3 and 4 and their polynomial views.

A homogeneous polynomial of degree k corresponds to the symmetric tensor
whose component at an index multiset with multiplicities ``m`` is the
monomial coefficient times ``prod(m_t!) / k!``.  So ``x1^3`` has
``C[0,0,0] = 1``, ``x1*x2^2`` has ``C[0,1,1] = 1/3`` and ``x1*x2*x3`` has
``C[0,1,2] = 1/6``.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Mapping

import numpy as np

from .scalar import (all_zero, as_exact, as_float, einsum, eye, fmt, frozen, is_exact, is_zero,
                     max_abs, parse_scalar, resolve_eps, zeros)

NABLA_C = "nabla_c"
CURVATURE = "curvature"
GENERAL = "general"
SYMMETRY_CLASSES = (NABLA_C, CURVATURE, GENERAL)

Monomial = tuple[int, ...]


def monomials(n: int, degree: int = 3) -> list[Monomial]:
    """Sorted 1-based index multisets in lexicographic order (x1^3 first)."""
    return [tuple(i + 1 for i in c)
            for c in itertools.combinations_with_replacement(range(n), degree)]


def multiplicity_weight(mono: Iterable[int]) -> Fraction:
    """``prod(m_t!) / k!`` for the multiset ``mono``."""
    mono = tuple(mono)
    counts = Counter(mono).values()
    return Fraction(math.prod(math.factorial(c) for c in counts), math.factorial(len(mono)))


def _all_orders(idx: tuple[int, ...]) -> set[tuple[int, ...]]:
    return set(itertools.permutations(idx))


def _symmetrize_fill(arr: np.ndarray, idx0: tuple[int, ...], value) -> None:
    for perm in _all_orders(idx0):
        arr[perm] = value


@dataclass(frozen=True, eq=False)
class CubicForm:
    """Totally symmetric (0,3)-tensor with components ``c[i, j, k]`` (0-based)."""

    c: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c)
        if c.ndim != 3 or len(set(c.shape)) != 1:
            raise ValueError(f"cubic form must have shape (n, n, n), got {c.shape}")
        if c.dtype != object:
            c = c.astype(float)
        for perm in ((1, 0, 2), (0, 2, 1)):
            if not all_zero(c - c.transpose(perm)):
                raise ValueError("cubic form is not symmetric")
        object.__setattr__(self, "c", frozen(c))

    @property
    def n(self) -> int:
        return self.c.shape[0]

    @property
    def exact(self) -> bool:
        return is_exact(self.c)

    def __getitem__(self, idx):
        return self.c[idx]

    @classmethod
    def zero(cls, n: int, exact: bool = True) -> "CubicForm":
        return cls(zeros((n, n, n), exact))

    @classmethod
    def from_components(cls, n: int, comps: Mapping[tuple[int, int, int], Any],
                        exact: bool = True) -> "CubicForm":
        """From 1-based components on index multisets."""
        arr = zeros((n, n, n), exact)
        for idx, val in comps.items():
            if len(idx) != 3 or not all(1 <= i <= n for i in idx):
                raise ValueError(f"index {idx} out of range for n={n}")
            val = parse_scalar(val, exact) if isinstance(val, str) else (
                Fraction(val) if exact else float(val))
            _symmetrize_fill(arr, tuple(sorted(i - 1 for i in idx)), val)
        return cls(arr)

    def components(self) -> dict[tuple[int, int, int], Any]:
        """Nonzero components on sorted 1-based multisets."""
        out = {}
        for mono in monomials(self.n):
            v = self.c[tuple(i - 1 for i in mono)]
            if v != 0:
                out[mono] = v
        return out

    def to_float(self) -> "CubicForm":
        return CubicForm(as_float(self.c))

    def to_exact(self) -> "CubicForm":
        return CubicForm(as_exact(self.c))

    def __add__(self, other: "CubicForm") -> "CubicForm":
        return CubicForm(_combine(self.c, other.c, 1))

    def __sub__(self, other: "CubicForm") -> "CubicForm":
        return CubicForm(_combine(self.c, other.c, -1))

    def __neg__(self) -> "CubicForm":
        return CubicForm(-self.c)

    def __mul__(self, s) -> "CubicForm":
        if self.exact and isinstance(s, (int, Fraction)):
            return CubicForm(self.c * Fraction(s))
        return CubicForm(as_float(self.c) * float(s))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, CubicForm) or other.n != self.n:
            return NotImplemented
        return bool(np.all(self.c == other.c))

    __hash__ = None

    def close_to(self, other: "CubicForm", tol: float | None = None) -> bool:
        return distance(self, other) <= resolve_eps(tol)

    def coordinates(self) -> list:
        """Component vector over multisets in monomial order."""
        return [self.c[tuple(i - 1 for i in mono)] for mono in monomials(self.n)]

    def __call__(self, x, y, z):
        return einsum("ijk,i,j,k->", self.c, np.asarray(x), np.asarray(y), np.asarray(z))[()]


def _combine(a: np.ndarray, b: np.ndarray, sign: int) -> np.ndarray:
    if is_exact(a) and is_exact(b):
        return a + b if sign > 0 else a - b
    a, b = as_float(a), as_float(b)
    return a + b if sign > 0 else a - b


def distance(a: CubicForm, b: CubicForm):
    return max_abs(_combine(a.c, b.c, -1))


# polynomial dictionary -------------------------------------------------------

def _normalize_monomial(mono, n: int, degree: int) -> Monomial:
    mono = tuple(sorted(int(i) for i in mono))
    if len(mono) != degree:
        raise ValueError(f"monomial {mono} must have degree {degree}")
    if not all(1 <= i <= n for i in mono):
        raise ValueError(f"monomial index out of range 1..{n}: {mono}")
    return mono


def cubic_from_polynomial(view: Mapping[Iterable[int], Any], n: int,
                          exact: bool = True) -> CubicForm:
    """Cubic form of a polynomial given as ``{monomial multiset: coefficient}``.

    Monomials are 1-based index tuples such as ``(1, 2, 2)`` for x1*x2^2.
    Repeated monomials (in any order) are summed.
    """
    arr = zeros((n, n, n), exact)
    acc: dict[Monomial, Any] = {}
    for mono, coef in view.items():
        key = _normalize_monomial(mono, n, 3)
        coef = parse_scalar(coef, exact) if isinstance(coef, str) else (
            Fraction(coef) if exact else float(coef))
        acc[key] = acc.get(key, 0) + coef
    for key, coef in acc.items():
        w = multiplicity_weight(key)
        _symmetrize_fill(arr, tuple(i - 1 for i in key), coef * w if exact else coef * float(w))
    return CubicForm(arr)


def polynomial_from_cubic(C: CubicForm) -> dict[Monomial, Any]:
    """Inverse of ``cubic_from_polynomial``; zero coefficients are omitted."""
    return _polynomial_of(C.c)


def _polynomial_of(arr: np.ndarray) -> dict[Monomial, Any]:
    n, degree = arr.shape[0], arr.ndim
    exact = is_exact(arr)
    out = {}
    for mono in monomials(n, degree):
        v = arr[tuple(i - 1 for i in mono)]
        if v != 0:
            inv = 1 / multiplicity_weight(mono)
            out[mono] = v * inv if exact else float(v) * float(inv)
    return out


def _format_coefficient(c, first: bool) -> tuple[str, str]:
    neg = c < 0
    mag = -c if neg else c
    sign = ("-" if neg else "") if first else (" - " if neg else " + ")
    if isinstance(mag, Fraction):
        text = "" if mag == 1 else (fmt(mag) if mag.denominator == 1 else f"({fmt(mag)})")
    else:
        text = "" if float(mag) == 1.0 else fmt(mag)
    return sign, text


def format_monomial(mono: Monomial) -> str:
    parts = []
    for idx, count in sorted(Counter(mono).items()):
        parts.append(f"x{idx}" + (f"^{count}" if count > 1 else ""))
    return "".join(parts)


def format_polynomial(view: Mapping[Monomial, Any]) -> str:
    """``4x1^3 + 6x1x2^2`` style text in monomial order; ``0`` when empty."""
    terms = [(tuple(sorted(m)), c) for m, c in view.items() if c != 0]
    if not terms:
        return "0"
    terms.sort(key=lambda t: t[0])
    out = []
    for pos, (mono, coef) in enumerate(terms):
        sign, text = _format_coefficient(coef, pos == 0)
        out.append(f"{sign}{text}{format_monomial(mono)}")
    return "".join(out)


def polynomial_record(view: Mapping[Monomial, Any]) -> list[dict]:
    return [{"monomial": list(m), "c": fmt(c)} for m, c in sorted(view.items())]


def cubic_from_record(record: Mapping, n: int, exact: bool = True, path: str = "cubic") -> CubicForm:
    """Parse ``{"basis": "polynomial"|"tensor", "terms": [...]}``."""
    from .algebra import ValidationError

    if not isinstance(record, Mapping):
        raise ValidationError(path, "expected an object")
    basis = record.get("basis", "polynomial")
    if basis not in ("polynomial", "tensor"):
        raise ValidationError(f"{path}.basis", "expected \"polynomial\" or \"tensor\"")
    terms = record.get("terms")
    if not isinstance(terms, list):
        raise ValidationError(f"{path}.terms", "expected a list")
    view: dict[Monomial, Any] = {}
    for pos, term in enumerate(terms):
        tpath = f"{path}.terms[{pos}]"
        if not isinstance(term, Mapping):
            raise ValidationError(tpath, "expected an object")
        mono = term.get("monomial")
        if (not isinstance(mono, list) or len(mono) != 3
                or not all(isinstance(i, int) and not isinstance(i, bool) for i in mono)):
            raise ValidationError(f"{tpath}.monomial", "expected three integer indices")
        if not all(1 <= i <= n for i in mono):
            raise ValidationError(f"{tpath}.monomial", f"index out of range 1..{n}")
        if "c" not in term:
            raise ValidationError(f"{tpath}.c", "missing field")
        raw = term["c"]
        if isinstance(raw, bool) or not isinstance(raw, (str, int, float)):
            raise ValidationError(f"{tpath}.c", "expected a scalar string or number")
        try:
            c = parse_scalar(raw, exact)
        except ValueError as exc:
            raise ValidationError(f"{tpath}.c", str(exc)) from None
        key = tuple(sorted(mono))
        if basis == "tensor":
            if key in view:
                raise ValidationError(tpath, "duplicate tensor component")
            c = c / multiplicity_weight(key) if exact else c / float(multiplicity_weight(key))
        view[key] = view.get(key, 0) + c
    return cubic_from_polynomial(view, n, exact)


# degree-4 tensors -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FourTensor:
    """Dense (0,4)-tensor with a declared symmetry class.

    ``nabla_c``: symmetric in the first three slots.  ``curvature``:
    antisymmetric in (1,2) and in (3,4), symmetric under pair swap.
    """

    t: np.ndarray
    kind: str = GENERAL

    def __post_init__(self):
        t = np.asarray(self.t)
        if t.ndim != 4 or len(set(t.shape)) != 1:
            raise ValueError(f"four-tensor must have shape (n, n, n, n), got {t.shape}")
        if self.kind not in SYMMETRY_CLASSES:
            raise ValueError(f"unknown symmetry class {self.kind!r}")
        if t.dtype != object:
            t = t.astype(float)
        object.__setattr__(self, "t", frozen(t))

    @property
    def n(self) -> int:
        return self.t.shape[0]

    @property
    def exact(self) -> bool:
        return is_exact(self.t)

    def __getitem__(self, idx):
        return self.t[idx]

    def class_defects(self) -> dict[str, Any]:
        return symmetry_defects(self.t)

    def holds(self, eps: float | None = None) -> bool:
        """Whether the declared symmetry class is satisfied."""
        if self.kind == GENERAL:
            return True
        t = self.t
        if self.kind == NABLA_C:
            checks = [(t, t.transpose(1, 0, 2, 3)), (t, t.transpose(0, 2, 1, 3))]
        else:
            checks = [(t, -t.transpose(1, 0, 2, 3)), (t, -t.transpose(0, 1, 3, 2)),
                      (t, t.transpose(2, 3, 0, 1))]
        if self.exact:
            # equality is much cheaper than forming Fraction differences
            return all(bool(np.all(a == b)) for a, b in checks)
        return all(max_abs(a - b) <= resolve_eps(eps) for a, b in checks)


def symmetry_defects(t: np.ndarray) -> dict[str, Any]:
    return {
        "sym12": max_abs(t - t.transpose(1, 0, 2, 3)),
        "sym23": max_abs(t - t.transpose(0, 2, 1, 3)),
        "antisym12": max_abs(t + t.transpose(1, 0, 2, 3)),
        "antisym34": max_abs(t + t.transpose(0, 1, 3, 2)),
        "pair_swap": max_abs(t - t.transpose(2, 3, 0, 1)),
        "bianchi": max_abs(t + t.transpose(1, 2, 0, 3) + t.transpose(2, 0, 1, 3)),
    }


def total_symmetry_defect(T: FourTensor):
    """``max |T_ijkt - T_ijtk|``; zero iff a ``nabla_c`` tensor is totally symmetric."""
    if T.kind != NABLA_C:
        raise ValueError(f"total_symmetry_defect needs class {NABLA_C!r}, got {T.kind!r}")
    return max_abs(T.t - T.t.transpose(0, 1, 3, 2))


def quartic_polynomial(T: FourTensor, eps: float | None = None) -> dict[Monomial, Any]:
    """Degree-4 polynomial of a totally symmetric tensor."""
    t = T.t
    perms = list(itertools.permutations(range(4)))
    worst = max(max_abs(t - t.transpose(p)) for p in perms)
    if not is_zero(worst, eps):
        raise ValueError("tensor is not totally symmetric")
    return _polynomial_of(t)


def quartic_from_polynomial(view: Mapping[Iterable[int], Any], n: int,
                            exact: bool = True) -> FourTensor:
    arr = zeros((n, n, n, n), exact)
    acc: dict[Monomial, Any] = {}
    for mono, coef in view.items():
        key = _normalize_monomial(mono, n, 4)
        coef = Fraction(coef) if exact else float(coef)
        acc[key] = acc.get(key, 0) + coef
    for key, coef in acc.items():
        w = multiplicity_weight(key)
        _symmetrize_fill(arr, tuple(i - 1 for i in key), coef * w if exact else coef * float(w))
    return FourTensor(arr, NABLA_C)


def conjugate_four(T: FourTensor, h: np.ndarray) -> FourTensor:
    """Components of T in the frame ``e'_a = sum_i h_ia e_i``."""
    return FourTensor(einsum("ia,jb,kc,ld,ijkl->abcd", h, h, h, h, T.t), T.kind)


# orthogonal maps and the isotropy action ---------------------------------------

ORTHO_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class OrthogonalMap:
    h: np.ndarray

    def __post_init__(self):
        h = np.asarray(self.h)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise ValueError("orthogonal map must be square")
        if h.dtype != object:
            h = h.astype(float)
        defect = max_abs(einsum("ki,kj->ij", h, h) - eye(h.shape[0], is_exact(h)))
        if isinstance(defect, Fraction) and defect != 0:
            raise ValueError(f"matrix is not orthogonal (defect {defect})")
        if not isinstance(defect, Fraction) and defect > ORTHO_TOL:
            raise ValueError(f"matrix is not orthogonal (defect {defect:.3g})")
        object.__setattr__(self, "h", frozen(h))

    @property
    def n(self) -> int:
        return self.h.shape[0]

    @property
    def inverse(self) -> "OrthogonalMap":
        return OrthogonalMap(np.ascontiguousarray(self.h.T))

    def compose(self, other: "OrthogonalMap") -> "OrthogonalMap":
        """``self`` after ``other``."""
        return OrthogonalMap(einsum("ij,jk->ik", self.h, other.h))


def act_isotropy(r, h: OrthogonalMap | np.ndarray, C: CubicForm) -> CubicForm:
    """``(r, h).C = r * C(h^{-1} ., h^{-1} ., h^{-1} .)``."""
    if not isinstance(h, OrthogonalMap):
        h = OrthogonalMap(h)
    if h.n != C.n:
        raise ValueError("dimension mismatch between map and cubic form")
    if r <= 0:
        raise ValueError("scaling factor must be positive")
    hinv = np.ascontiguousarray(h.h.T)
    out = einsum("ai,bj,ck,abc->ijk", hinv, hinv, hinv, C.c)
    if is_exact(out) and isinstance(r, (int, Fraction)):
        return CubicForm(out * Fraction(r))
    return CubicForm(as_float(out) * float(r))


# omega-basis reporting view ------------------------------------------------------

def _pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def omega_coefficients(R: FourTensor) -> dict[tuple[tuple[int, int], tuple[int, int]], Any]:
    """Coefficients on ``omega_ij (.) omega_kl`` for pairs ``(i,j) <= (k,l)`` (1-based).

    Off-diagonal coefficients are ``2 R_ijkl`` and diagonal ones ``R_ijij``.
    """
    if R.kind != CURVATURE:
        raise ValueError(f"omega_coefficients needs class {CURVATURE!r}, got {R.kind!r}")
    pairs = _pairs(R.n)
    out = {}
    for a, (i, j) in enumerate(pairs):
        for (k, l) in pairs[a:]:
            v = R.t[i, j, k, l]
            coef = v if (i, j) == (k, l) else 2 * v
            out[((i + 1, j + 1), (k + 1, l + 1))] = coef
    return out


def omega_reconstruct(coeffs: Mapping, n: int, exact: bool = True) -> FourTensor:
    """Curvature-class tensor from its omega coefficients."""
    t = zeros((n, n, n, n), exact)
    for ((i, j), (k, l)), coef in coeffs.items():
        i, j, k, l = i - 1, j - 1, k - 1, l - 1
        coef = Fraction(coef) if exact else float(coef)
        v = coef if (i, j) == (k, l) else coef / 2
        for (p, q, r, s) in ((i, j, k, l), (k, l, i, j)):
            t[p, q, r, s] = v
            t[q, p, r, s] = -v
            t[p, q, s, r] = -v
            t[q, p, s, r] = v
    return FourTensor(t, CURVATURE)
