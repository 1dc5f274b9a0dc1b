"""Lie algebras given by structure constants in a chosen frame."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping

import numpy as np

from . import linalg
from .scalar import (all_zero, as_float, einsum, eye, fmt, frozen, is_exact, is_zero, max_abs,
                     parse_scalar, zeros)

FAMILIES = ("abelian", "rhn", "heisenberg3", "heisenberg_product")


class ValidationError(ValueError):
    """Malformed input; ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
        self.message = message


class UnsupportedError(RuntimeError):
    """A well-formed request outside what the library handles."""


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """Structure constants ``a[i, j, k]``: coefficient of ``e_k`` in ``[e_i, e_j]``.

    The array is dense and read-only; ``brackets()`` gives the sparse
    1-based view with ``i < j``.
    """

    a: np.ndarray
    orthonormal: bool = True
    name: str = "custom"

    def __post_init__(self):
        a = np.asarray(self.a)
        if a.ndim != 3 or len(set(a.shape)) != 1 or a.shape[0] < 1:
            raise ValueError(f"structure constants must have shape (n, n, n), got {a.shape}")
        if a.dtype != object:
            a = a.astype(float)
        if not all_zero(a + a.transpose(1, 0, 2), scale=1.0):
            raise ValueError("structure constants are not antisymmetric")
        object.__setattr__(self, "a", frozen(a))

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def exact(self) -> bool:
        return is_exact(self.a)

    def brackets(self) -> dict[tuple[int, int, int], Any]:
        out = {}
        for i in range(self.n):
            for j in range(i + 1, self.n):
                for k in range(self.n):
                    if self.a[i, j, k] != 0:
                        out[(i + 1, j + 1, k + 1)] = self.a[i, j, k]
        return out

    def to_float(self) -> "LieAlgebra":
        return LieAlgebra(as_float(self.a), self.orthonormal, self.name)

    def is_abelian(self) -> bool:
        return all_zero(self.a)


def from_brackets(n: int, entries: Mapping[tuple[int, int, int], Any], *,
                  exact: bool = True, orthonormal: bool = True,
                  name: str = "custom") -> LieAlgebra:
    """Build from 1-based entries ``(i, j, k) -> c`` with antisymmetric completion.

    Entries may be given for either order of ``(i, j)`` as long as they agree.
    """
    if n < 1:
        raise ValueError("dimension must be positive")
    a = zeros((n, n, n), exact)
    seen: dict[tuple[int, int, int], Any] = {}
    for (i, j, k), c in entries.items():
        for idx in (i, j, k):
            if not 1 <= idx <= n:
                raise ValueError(f"index {idx} out of range 1..{n}")
        if i == j:
            if c != 0:
                raise ValueError(f"[e_{i}, e_{i}] must vanish")
            continue
        c = parse_scalar(c, exact) if isinstance(c, str) else (Fraction(c) if exact else float(c))
        key = (min(i, j), max(i, j), k)
        val = c if i < j else -c
        if key in seen and seen[key] != val:
            raise ValueError(f"inconsistent entries for [e_{key[0]}, e_{key[1]}] along e_{k}")
        seen[key] = val
        a[key[0] - 1, key[1] - 1, k - 1] = val
        a[key[1] - 1, key[0] - 1, k - 1] = -val
    return LieAlgebra(a, orthonormal, name)


def build_builtin(family: str, n: int, exact: bool = True) -> LieAlgebra:
    """Standard-basis structure constants of the built-in families."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    if n < 1:
        raise ValueError(f"{family} requires n >= 1")
    entries: dict[tuple[int, int, int], int] = {}
    if family == "rhn":
        if n < 2:
            raise ValueError("rhn requires n >= 2")
        entries = {(1, i, i): 1 for i in range(2, n + 1)}
    elif family == "heisenberg3":
        if n != 3:
            raise ValueError("heisenberg3 requires n = 3")
        entries = {(1, 2, 3): 1}
    elif family == "heisenberg_product":
        if n < 3:
            raise ValueError("heisenberg_product requires n >= 3")
        entries = {(1, 2, 3): 1}
    return from_brackets(n, entries, exact=exact, name=family)


def family_of(alg: LieAlgebra) -> str | None:
    """Family tag for algebras built by ``build_builtin`` (or equal to one)."""
    if alg.name in FAMILIES:
        return alg.name
    return None


def jacobi_defect(alg: LieAlgebra):
    """Largest entry of the cyclic Jacobi sum over all (i, j, k, l)."""
    a = alg.a
    j = einsum("ijm,mkl->ijkl", a, a)
    total = j + j.transpose(1, 2, 0, 3) + j.transpose(2, 0, 1, 3)
    return max_abs(total)


def bracket(alg: LieAlgebra, x, y) -> np.ndarray:
    x, y = np.asarray(x), np.asarray(y)
    if x.shape != (alg.n,) or y.shape != (alg.n,):
        raise ValueError(f"vectors must have length {alg.n}")
    return einsum("i,j,ijk->k", x, y, alg.a)


@dataclass(frozen=True, eq=False)
class FrameChange:
    """Change of frame; columns of ``p`` are the new basis vectors in old coordinates.

    Coordinates transform by ``p^{-1}`` (old to new) and ``p`` (new to old).
    """

    p: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "p", frozen(np.asarray(self.p)))

    @property
    def inverse_matrix(self) -> np.ndarray:
        if is_exact(self.p):
            return linalg.inverse(self.p)
        return np.linalg.inv(self.p)

    def to_new(self, v) -> np.ndarray:
        return einsum("ij,j->i", self.inverse_matrix, np.asarray(v))

    def to_old(self, v) -> np.ndarray:
        return einsum("ij,j->i", self.p, np.asarray(v))

    def then(self, other: "FrameChange") -> "FrameChange":
        """Apply ``self`` first, then ``other`` (expressed in self's new frame)."""
        return FrameChange(einsum("ij,jk->ik", self.p, other.p))


def change_frame(alg: LieAlgebra, p: np.ndarray, *, orthonormal: bool | None = None) -> LieAlgebra:
    """Structure constants in the frame whose basis vectors are the columns of p."""
    p = np.asarray(p)
    if not is_exact(alg.a) or not is_exact(p):
        p = as_float(p)
        pinv = np.linalg.inv(p)
    else:
        pinv = linalg.inverse(p)
    new = einsum("ia,jb,ijk,ck->abc", p, p, alg.a, pinv)
    same = all_zero(p - eye(alg.n, is_exact(p)))
    return LieAlgebra(new, alg.orthonormal if orthonormal is None else orthonormal,
                      alg.name if same else "custom")


def orthonormalize(alg: LieAlgebra, gram) -> tuple[LieAlgebra, FrameChange]:
    """Re-express ``alg`` in a frame orthonormal for ``gram``.

    The frame is ``P = (L^T)^{-1}`` with ``L`` the lower Cholesky factor of
    the Gram matrix, so ``P^T G P = I``.  Exact mode needs rational square
    pivots and raises ``InexactError`` otherwise.
    """
    g = np.asarray(gram)
    n = alg.n
    if g.shape != (n, n):
        raise ValueError(f"Gram matrix must be {n}x{n}")
    if not all_zero(g - g.T):
        raise ValueError("Gram matrix is not symmetric")
    exact = alg.exact and is_exact(g)
    if exact:
        if not linalg.leading_minors_positive(g):
            raise ValueError("Gram matrix is not positive definite")
        L = linalg.cholesky(g)
        p = linalg.inverse(np.ascontiguousarray(L.T))
    else:
        g = as_float(g)
        L = linalg.cholesky(g)
        p = np.linalg.inv(L.T)
    src = alg if exact else alg.to_float()
    return change_frame(src, p, orthonormal=True), FrameChange(p)


def _field(record: Mapping, key: str, path: str):
    if not isinstance(record, Mapping):
        raise ValidationError(path, "expected an object")
    if key not in record:
        raise ValidationError(f"{path}.{key}" if path else key, "missing field")
    return record[key]


def _scalar_field(value, path: str, exact: bool):
    if isinstance(value, bool) or not isinstance(value, (str, int, float)):
        raise ValidationError(path, "expected a scalar string or number")
    try:
        return parse_scalar(value, exact)
    except ValueError as exc:
        raise ValidationError(path, str(exc)) from None


def _index_field(value, path: str, n: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(path, "expected an integer index")
    if not 1 <= value <= n:
        raise ValidationError(path, f"index {value} out of range 1..{n}")
    return value


def from_record(record: Mapping, exact: bool = True, path: str = "") -> tuple[LieAlgebra, np.ndarray | None]:
    """Parse an ingestion record.

    Accepts ``{"dim", "brackets", "gram"}`` or ``{"family", "n"}``.  Returns
    the algebra in the given frame and the Gram matrix (None for identity).
    """
    def sub(key):
        return f"{path}.{key}" if path else key

    if not isinstance(record, Mapping):
        raise ValidationError(path, "expected an object")
    if "family" in record:
        fam = record["family"]
        nval = _field(record, "n", path)
        if fam not in FAMILIES:
            raise ValidationError(sub("family"), f"unknown family {fam!r}")
        if isinstance(nval, bool) or not isinstance(nval, int):
            raise ValidationError(sub("n"), "expected an integer")
        try:
            return build_builtin(fam, nval, exact), None
        except ValueError as exc:
            raise ValidationError(sub("n"), str(exc)) from None
    n = _field(record, "dim", path)
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ValidationError(sub("dim"), "expected a positive integer")
    raw = record.get("brackets", [])
    if not isinstance(raw, list):
        raise ValidationError(sub("brackets"), "expected a list")
    entries: dict[tuple[int, int, int], Any] = {}
    for pos, item in enumerate(raw):
        ipath = f"{sub('brackets')}[{pos}]"
        i = _index_field(_field(item, "i", ipath), f"{ipath}.i", n)
        j = _index_field(_field(item, "j", ipath), f"{ipath}.j", n)
        k = _index_field(_field(item, "k", ipath), f"{ipath}.k", n)
        c = _scalar_field(_field(item, "c", ipath), f"{ipath}.c", exact)
        if i == j and c != 0:
            raise ValidationError(ipath, "diagonal bracket must vanish")
        key = (i, j, k)
        if key in entries:
            raise ValidationError(ipath, "duplicate entry")
        entries[key] = c
    gram_raw = record.get("gram", "identity")
    gram = None
    if gram_raw != "identity":
        gpath = sub("gram")
        if not isinstance(gram_raw, list) or len(gram_raw) != n:
            raise ValidationError(gpath, f"expected \"identity\" or an {n}x{n} matrix")
        gram = zeros((n, n), exact)
        for r, row in enumerate(gram_raw):
            if not isinstance(row, list) or len(row) != n:
                raise ValidationError(f"{gpath}[{r}]", f"expected a row of length {n}")
            for c_, val in enumerate(row):
                gram[r, c_] = _scalar_field(val, f"{gpath}[{r}][{c_}]", exact)
    try:
        alg = from_brackets(n, entries, exact=exact, orthonormal=gram is None)
    except ValueError as exc:
        raise ValidationError(sub("brackets"), str(exc)) from None
    defect = jacobi_defect(alg)
    if not is_zero(defect):
        raise ValidationError(sub("brackets"), f"Jacobi identity fails (defect {fmt(defect)})")
    return alg, gram


def to_record(alg: LieAlgebra) -> dict:
    return {
        "dim": alg.n,
        "brackets": [{"i": i, "j": j, "k": k, "c": fmt(c)} for (i, j, k), c in alg.brackets().items()],
        "gram": "identity",
    }


def identity_frame(n: int, exact: bool = True) -> FrameChange:
    return FrameChange(eye(n, exact))
