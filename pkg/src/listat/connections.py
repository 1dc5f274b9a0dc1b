"""Left-invariant connections in an orthonormal frame.

Connection coefficients follow ``G[i, j, k] = <nabla_{e_i} e_j, e_k>``, so
the first index is the differentiation direction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import LieAlgebra
from .scalar import as_float, einsum, frozen, is_exact, max_abs, unify, zeros
from .symtensor import NABLA_C, CubicForm, FourTensor


@dataclass(frozen=True, eq=False)
class ConnectionCoeffs:
    gamma: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.gamma)
        if g.ndim != 3 or len(set(g.shape)) != 1:
            raise ValueError(f"connection coefficients must have shape (n, n, n), got {g.shape}")
        if g.dtype != object:
            g = g.astype(float)
        object.__setattr__(self, "gamma", frozen(g))

    @property
    def n(self) -> int:
        return self.gamma.shape[0]

    @property
    def exact(self) -> bool:
        return is_exact(self.gamma)

    def __getitem__(self, idx):
        return self.gamma[idx]


@dataclass(frozen=True, eq=False)
class DifferenceTensor:
    """``k[u, i, j] = (K_u)_{ij} = <K_{e_u} e_i, e_j>``."""

    k: np.ndarray

    def __post_init__(self):
        k = np.asarray(self.k)
        if k.dtype != object:
            k = k.astype(float)
        object.__setattr__(self, "k", frozen(k))

    @property
    def n(self) -> int:
        return self.k.shape[0]

    @property
    def matrices(self) -> list[np.ndarray]:
        return [self.k[u] for u in range(self.n)]

    def symmetry_defect(self):
        """Largest violation of ``K_u`` symmetry and of the cyclic identity."""
        return max(max_abs(self.k - self.k.transpose(0, 2, 1)),
                   max_abs(self.k - self.k.transpose(1, 0, 2)))


def levi_civita(alg: LieAlgebra) -> ConnectionCoeffs:
    """``G_ij^k = (a_ij^k + a_ki^j + a_kj^i) / 2``; needs an orthonormal frame."""
    if not alg.orthonormal:
        raise ValueError("Levi-Civita coefficients need an orthonormal frame; orthonormalize first")
    a = alg.a
    s = a + np.einsum("kij->ijk", a) + np.einsum("kji->ijk", a)
    return ConnectionCoeffs(s * Fraction(1, 2) if alg.exact else s / 2)


def difference_tensor(C: CubicForm) -> DifferenceTensor:
    """``(K_u)_ij = -C_uij / 2``."""
    return DifferenceTensor(-C.c * Fraction(1, 2) if C.exact else -C.c / 2)


def statistical_connection(lc: ConnectionCoeffs, K: DifferenceTensor) -> ConnectionCoeffs:
    _, (g, k) = unify(lc.gamma, K.k)
    return ConnectionCoeffs(g + k)


def dual_connection(lc: ConnectionCoeffs, K: DifferenceTensor) -> ConnectionCoeffs:
    _, (g, k) = unify(lc.gamma, K.k)
    return ConnectionCoeffs(g - k)


def torsion_defect(conn: ConnectionCoeffs, alg: LieAlgebra):
    """``max |G_ij^k - G_ji^k - a_ij^k|``."""
    _, (g, a) = unify(conn.gamma, alg.a)
    return max_abs(g - g.transpose(1, 0, 2) - a)


def metric_compat_cubic(conn: ConnectionCoeffs) -> np.ndarray:
    """``(nabla g)_tij = -G_ti^j - G_tj^i`` in an orthonormal frame."""
    g = conn.gamma
    return -g - g.transpose(0, 2, 1)


def duality_defect(conn: ConnectionCoeffs, dual: ConnectionCoeffs):
    """``max |G_ij^k + Gbar_ik^j|``; zero when the pair is dual for the metric."""
    _, (g, d) = unify(conn.gamma, dual.gamma)
    return max_abs(g + d.transpose(0, 2, 1))


def _nonzero_entries(g: np.ndarray):
    return [tuple(idx) for idx in np.argwhere(g != 0)]


def nabla_cubic(conn: ConnectionCoeffs, C: CubicForm) -> FourTensor:
    """``T_ijkt = -sum_u (G_ti^u C_ujk + G_tj^u C_iuk + G_tk^u C_iju)``.

    The differentiation slot is the last index.  The sum runs over the
    nonzero connection coefficients only, which keeps exact arithmetic cheap
    for the sparse coefficients of the built-in families.
    """
    exact, (g, c) = unify(conn.gamma, C.c)
    n = c.shape[0]
    t = zeros((n, n, n, n), exact)
    for (tt, i, u) in _nonzero_entries(g):
        v = g[tt, i, u]
        t[i, :, :, tt] -= v * c[u, :, :]
        t[:, i, :, tt] -= v * c[:, u, :]
        t[:, :, i, tt] -= v * c[:, :, u]
    return FourTensor(t, NABLA_C)


def nabla_K(conn: ConnectionCoeffs, K: DifferenceTensor) -> np.ndarray:
    """``N[t, i, j, l] = (nabla_{e_t} K)_ij^l``.

    ``sum_m (K_i)_jm G_tm^l - sum_u G_ti^u (K_u)_jl - sum_u G_tj^u (K_i)_ul``.
    """
    _, (g, k) = unify(conn.gamma, K.k)
    return (einsum("ijm,tml->tijl", k, g)
            - einsum("tiu,ujl->tijl", g, k)
            - einsum("tju,iul->tijl", g, k))


def connection_from_cubic(alg: LieAlgebra, C: CubicForm
                          ) -> tuple[ConnectionCoeffs, ConnectionCoeffs, DifferenceTensor]:
    """Levi-Civita, statistical connection and difference tensor for (alg, C)."""
    lc = levi_civita(alg)
    K = difference_tensor(C)
    return lc, statistical_connection(lc, K), K


def float_connection(conn: ConnectionCoeffs) -> ConnectionCoeffs:
    return ConnectionCoeffs(as_float(conn.gamma))
