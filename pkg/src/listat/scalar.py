"""Scalar modes and array helpers.

Exact values are ``fractions.Fraction`` objects held in numpy arrays of
dtype ``object``; floating values are ``float64`` arrays.  The mode of an
array is read from its dtype, so every routine works in both modes without
an explicit flag.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

DEFAULT_EPS = 1e-9
EPS_ENV = "LISTAT_EPS"


class InexactError(ValueError):
    """Raised when an exact computation would need an irrational value."""


def resolve_eps(eps: float | None = None) -> float:
    """Return the floating comparison tolerance.

    An explicit value wins, then the ``LISTAT_EPS`` environment variable,
    then the default 1e-9.
    """
    if eps is None:
        raw = os.environ.get(EPS_ENV)
        eps = DEFAULT_EPS if raw in (None, "") else float(raw)
    if not eps > 0 or not math.isfinite(eps):
        raise ValueError(f"tolerance must be a positive finite number, got {eps!r}")
    return float(eps)


def parse_scalar(value, exact: bool = True):
    """Parse ``"p/q"``, decimal strings, ints or floats.

    Floats given in exact mode are read through their shortest decimal
    representation, so ``0.1`` becomes ``1/10``.
    """
    if isinstance(value, bool):
        raise ValueError("booleans are not scalars")
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite scalar {value!r}")
        value = repr(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty scalar string")
        try:
            q = Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse scalar {value!r}") from exc
    elif isinstance(value, (int, Rational)):
        q = Fraction(value)
    else:
        raise ValueError(f"cannot parse scalar {value!r}")
    return q if exact else float(q)


def is_exact(arr: np.ndarray) -> bool:
    return np.asarray(arr).dtype == object


def zeros(shape, exact: bool) -> np.ndarray:
    if exact:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros(shape, dtype=float)


def eye(n: int, exact: bool) -> np.ndarray:
    out = zeros((n, n), exact)
    for i in range(n):
        out[i, i] = Fraction(1) if exact else 1.0
    return out


def as_exact(arr) -> np.ndarray:
    """Convert to an object array of Fractions (floats converted exactly)."""
    a = np.asarray(arr)
    out = np.empty(a.shape, dtype=object)
    flat = out.reshape(-1)
    for idx, x in enumerate(a.reshape(-1)):
        flat[idx] = x if isinstance(x, Fraction) else Fraction(x)
    return out


def as_float(arr) -> np.ndarray:
    a = np.asarray(arr)
    if a.dtype == object:
        return np.array([float(x) for x in a.reshape(-1)], dtype=float).reshape(a.shape)
    return a.astype(float)


def like(arr, exact: bool) -> np.ndarray:
    return as_exact(arr) if exact else as_float(arr)


def unify(*arrays) -> tuple[bool, list[np.ndarray]]:
    """Bring arrays to a common mode; float wins when modes are mixed."""
    exact = all(is_exact(a) for a in arrays)
    return exact, [like(a, exact) for a in arrays]


def frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=arr.dtype, copy=True)
    arr.flags.writeable = False
    return arr


def max_abs(arr):
    """Largest absolute entry; exact zero for empty exact arrays."""
    a = np.asarray(arr)
    if a.size == 0:
        return Fraction(0) if a.dtype == object else 0.0
    if a.dtype == object:
        return max(abs(x) for x in a.reshape(-1))
    return float(np.max(np.abs(a)))


def is_zero(x, eps: float | None = None, scale: float = 1.0) -> bool:
    """Exact equality to zero for Fractions, ``|x| <= scale*eps`` otherwise."""
    if isinstance(x, Fraction) or isinstance(x, int):
        return x == 0
    return abs(float(x)) <= scale * resolve_eps(eps)


def all_zero(arr, eps: float | None = None, scale: float = 1.0) -> bool:
    return is_zero(max_abs(arr), eps, scale)


def exact_sqrt(q: Fraction) -> Fraction:
    """Square root of a rational that is a rational square."""
    q = Fraction(q)
    if q < 0:
        raise InexactError(f"negative value {q} has no real square root")
    num, den = q.numerator, q.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn != num or rd * rd != den:
        raise InexactError(f"{q} is not the square of a rational")
    return Fraction(rn, rd)


def sqrt(x):
    if isinstance(x, Fraction):
        return exact_sqrt(x)
    return math.sqrt(x)


def _integer_form(arr: np.ndarray) -> tuple[np.ndarray, int, int]:
    flat = [x if isinstance(x, Fraction) else Fraction(x) for x in arr.reshape(-1)]
    den = math.lcm(*(x.denominator for x in flat)) if flat else 1
    ints = [x.numerator * (den // x.denominator) for x in flat]
    bound = max((abs(v) for v in ints), default=0)
    out = np.empty(arr.shape, dtype=object)
    out.reshape(-1)[:] = ints
    return out, den, bound


def _contraction_length(subscripts: str, operands: Sequence[np.ndarray]) -> int:
    inputs, _, output = subscripts.replace(" ", "").partition("->")
    sizes: dict[str, int] = {}
    for spec, op in zip(inputs.split(","), operands):
        for ch, dim in zip(spec, op.shape):
            sizes[ch] = dim
    return math.prod(d for ch, d in sizes.items() if ch not in output) or 1


def einsum(subscripts: str, *operands) -> np.ndarray:
    """``np.einsum`` that stays exact on Fraction arrays.

    Exact operands are scaled to integers by a common denominator so the
    contraction runs on machine integers when the result provably fits in
    int64, and on Python integers otherwise.
    """
    exact, ops = unify(*operands)
    if not exact:
        return np.einsum(subscripts, *ops)
    if "->" not in subscripts:
        raise ValueError("exact einsum needs an explicit output specification")
    scaled = [_integer_form(op) for op in ops]
    den = math.prod(s[1] for s in scaled)
    bound = math.prod(s[2] for s in scaled) * _contraction_length(subscripts, ops)
    if bound < 2**62:
        raw = np.einsum(subscripts, *[s[0].astype(np.int64) for s in scaled])
        raw = raw.astype(object)
    else:
        raw = np.einsum(subscripts, *[s[0] for s in scaled])
    raw = np.asarray(raw, dtype=object)
    out = np.empty(raw.shape, dtype=object)
    out.reshape(-1)[:] = [Fraction(int(v), den) for v in raw.reshape(-1)]
    return out


def fmt(x, digits: int = 12) -> str:
    """Render a scalar: ``p/q`` for exact values, 12 significant digits otherwise."""
    if isinstance(x, (Fraction, int)) and not isinstance(x, bool):
        q = Fraction(x)
        return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
    v = float(x)
    if v == 0:
        return "0"
    return f"{v:.{digits}g}"


def fmt_all(values: Iterable) -> list[str]:
    return [fmt(v) for v in values]
