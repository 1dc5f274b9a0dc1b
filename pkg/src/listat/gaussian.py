"""Isotropic Gaussian family N(mu, sigma * I_m) as a homogeneous statistical manifold.

Coordinates are ``(sigma, mu_1, ..., mu_m)``.  The Fisher metric and the
alpha-tensor ``alpha * E[dl dl dl]`` have closed forms; an independent
Gauss-Hermite quadrature of the score products (scores taken by complex-step
differentiation of the log-density) certifies them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numpy.polynomial.hermite_e import hermegauss

from .algebra import LieAlgebra, build_builtin
from .curvature import StructureReport, structure_report
from .symtensor import CubicForm, cubic_from_polynomial, polynomial_from_cubic

DEFAULT_ORDER = 32


@dataclass(frozen=True)
class GaussianPoint:
    sigma: float
    mu: tuple[float, ...]

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"variance must be positive, got {self.sigma!r}")
        object.__setattr__(self, "mu", tuple(float(x) for x in self.mu))

    @property
    def m(self) -> int:
        return len(self.mu)


def point(m: int, sigma: float = 1.0, mu=None) -> GaussianPoint:
    mu = (0.0,) * m if mu is None else tuple(mu)
    if len(mu) != m:
        raise ValueError(f"mean must have length {m}")
    return GaussianPoint(float(sigma), mu)


def _check(m: int, p: GaussianPoint) -> None:
    if m < 1:
        raise ValueError("m must be at least 1")
    if p.m != m:
        raise ValueError(f"point has mean of length {p.m}, expected {m}")


def fisher_closed(m: int, p: GaussianPoint) -> np.ndarray:
    """``g_ss = m / (2 sigma^2)``, ``g_mu_i mu_j = delta_ij / sigma``."""
    _check(m, p)
    g = np.zeros((m + 1, m + 1))
    g[0, 0] = m / (2 * p.sigma ** 2)
    g[1:, 1:] = np.eye(m) / p.sigma
    return g


def ac_closed(m: int, alpha: float, p: GaussianPoint) -> np.ndarray:
    """``T_sss = alpha m / sigma^3``, ``T_s mu_i mu_j = alpha delta_ij / sigma^2``."""
    _check(m, p)
    t = np.zeros((m + 1,) * 3)
    t[0, 0, 0] = alpha * m / p.sigma ** 3
    for i in range(1, m + 1):
        v = alpha / p.sigma ** 2
        t[0, i, i] = t[i, 0, i] = t[i, i, 0] = v
    return t


def log_density(x: np.ndarray, sigma, mu) -> np.ndarray:
    """Log-density of N(mu, sigma I) at rows of x; accepts complex parameters."""
    m = x.shape[-1]
    diff = x - mu
    return -0.5 * m * np.log(2 * np.pi * sigma) - np.sum(diff * diff, axis=-1) / (2 * sigma)


def scores(m: int, p: GaussianPoint, x: np.ndarray, h: float = 1e-30) -> np.ndarray:
    """Gradient of the log-density in (sigma, mu) at sample rows x, by complex step."""
    mu = np.array(p.mu, dtype=complex)
    out = np.empty((x.shape[0], m + 1))
    out[:, 0] = np.imag(log_density(x, p.sigma + 1j * h, mu)) / h
    for i in range(m):
        shifted = mu.copy()
        shifted[i] += 1j * h
        out[:, i + 1] = np.imag(log_density(x, p.sigma, shifted)) / h
    return out


def _grid(m: int, p: GaussianPoint, order: int) -> tuple[np.ndarray, np.ndarray]:
    if order < 8:
        raise ValueError("quadrature order must be at least 8")
    z, w = hermegauss(order)
    w = w / math.sqrt(2 * math.pi)
    mesh = np.stack(np.meshgrid(*([z] * m), indexing="ij"), axis=-1).reshape(-1, m)
    weights = np.prod(np.stack(np.meshgrid(*([w] * m), indexing="ij"), axis=-1).reshape(-1, m),
                      axis=1)
    x = np.array(p.mu) + math.sqrt(p.sigma) * mesh
    return x, weights


def fisher_quadrature(m: int, p: GaussianPoint, order: int = DEFAULT_ORDER) -> np.ndarray:
    """``E[s_a s_b]`` by a tensor Gauss-Hermite rule."""
    _check(m, p)
    x, w = _grid(m, p, order)
    s = scores(m, p, x)
    return np.einsum("n,na,nb->ab", w, s, s)


def ac_quadrature(m: int, alpha: float, p: GaussianPoint, order: int = DEFAULT_ORDER) -> np.ndarray:
    """``alpha E[s_a s_b s_c]`` by a tensor Gauss-Hermite rule."""
    _check(m, p)
    x, w = _grid(m, p, order)
    s = scores(m, p, x)
    return alpha * np.einsum("n,na,nb,nc->abc", w, s, s, s)


def left_invariant_frame(m: int, p: GaussianPoint) -> np.ndarray:
    """Columns ``X_0 = 2 sigma d_sigma`` and ``X_i = sqrt(sigma) d_mu_i``."""
    _check(m, p)
    f = np.zeros((m + 1, m + 1))
    f[0, 0] = 2 * p.sigma
    f[1:, 1:] = math.sqrt(p.sigma) * np.eye(m)
    return f


def frame_bracket(m: int, p: GaussianPoint, a: int, b: int, h: float = 1e-6) -> np.ndarray:
    """``[X_a, X_b]`` at p in coordinates, via central differences of the frame."""
    def field(q: np.ndarray, k: int) -> np.ndarray:
        return left_invariant_frame(m, GaussianPoint(q[0], tuple(q[1:])))[:, k]

    base = np.array([p.sigma, *p.mu])

    def deriv(k: int, direction: np.ndarray) -> np.ndarray:
        return (field(base + h * direction, k) - field(base - h * direction, k)) / (2 * h)

    xa, xb = field(base, a), field(base, b)
    return deriv(b, xa) - deriv(a, xb)


def frame_gram(m: int, p: GaussianPoint) -> np.ndarray:
    f = left_invariant_frame(m, p)
    return f.T @ fisher_closed(m, p) @ f


def frame_cubic(m: int, alpha: float, p: GaussianPoint, scale: np.ndarray | None = None) -> np.ndarray:
    """alpha-tensor components in the frame ``X_a * scale_a`` at p."""
    f = left_invariant_frame(m, p)
    if scale is not None:
        f = f * np.asarray(scale)[None, :]
    return np.einsum("ia,jb,kc,ijk->abc", f, f, f, ac_closed(m, alpha, p))


@dataclass(frozen=True)
class TakanoData:
    """Left-invariant data of the alpha-structure on the isotropic Gaussian family.

    ``algebra`` is rhn(m+1) in the frame ``e_1 = X_0``, ``e_i = sqrt(2m) X_i``,
    which is orthonormal for the Fisher metric divided by 2m.  ``cubic``
    lists the alpha-tensor in that frame (equal to ``C^(2 m alpha)``);
    ``structure_cubic = cubic / (2m)`` is the cubic form of the rescaled
    metric with the same alpha-connection (equal to ``C^alpha``).
    """

    m: int
    alpha: float
    algebra: LieAlgebra
    cubic: CubicForm
    structure_cubic: CubicForm


def takano_left_invariant_data(m: int, alpha: float, p: GaussianPoint | None = None) -> TakanoData:
    if m < 1:
        raise ValueError("m must be at least 1")
    p = p or point(m)
    scale = np.array([1.0] + [math.sqrt(2 * m)] * m)
    raw = frame_cubic(m, alpha, p, scale)
    return TakanoData(m, alpha, build_builtin("rhn", m + 1), CubicForm(raw), CubicForm(raw / (2 * m)))


def c_alpha(n: int, beta, exact: bool = False) -> CubicForm:
    """``beta (4 x1^3 + 6 sum_{i>=2} x1 xi^2)``."""
    view = {(1, 1, 1): 4 * beta}
    view.update({(1, i, i): 6 * beta for i in range(2, n + 1)})
    return cubic_from_polynomial(view, n, exact)


def takano_algebra(m: int) -> LieAlgebra:
    """Structure constants in the Fisher-orthonormal frame ``X_0 / sqrt(2m), X_i``."""
    s = 1 / math.sqrt(2 * m)
    a = np.zeros((m + 1,) * 3)
    for i in range(1, m + 1):
        a[0, i, i] = s
        a[i, 0, i] = -s
    return LieAlgebra(a, True, "custom")


def takano_structure(m: int, alpha: float, p: GaussianPoint | None = None) -> tuple[LieAlgebra, CubicForm]:
    """Algebra and cubic form of (Fisher metric, alpha-connection) in a Fisher-orthonormal frame."""
    p = p or point(m)
    scale = np.array([1 / math.sqrt(2 * m)] + [1.0] * m)
    return takano_algebra(m), CubicForm(frame_cubic(m, alpha, p, scale))


def verify_takano(m: int, alpha: float, eps: float | None = None) -> StructureReport:
    """Structure report of the alpha-structure, in floating mode."""
    alg, C = takano_structure(m, alpha)
    return structure_report(alg, C, eps)


def expected_curvature(m: int, alpha) -> float:
    return (alpha * alpha - 1) / (2 * m)


def correspondence_coefficients(C: CubicForm) -> tuple:
    """Coefficients of (x1^3, x1^2 x2, x1 x2^2, x2^3) for a two-variable cubic."""
    if C.n != 2:
        raise ValueError("needs a two-variable cubic")
    view = polynomial_from_cubic(C)
    zero = Fraction(0) if C.exact else 0.0
    return tuple(view.get(mono, zero) for mono in ((1, 1, 1), (1, 1, 2), (1, 2, 2), (2, 2, 2)))
