"""Curvature tensors and structure detectors.

``R[i, j, k, l] = <R(e_i, e_j) e_k, e_l>`` with
``R(X, Y) = [nabla_X, nabla_Y] - nabla_[X,Y]``.  With this convention the
Levi-Civita curvature of real hyperbolic space has ``R[0,1,0,1] = 1`` and
sectional curvature ``R(v,w,w,v)/|v^w|^2 = -1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from .algebra import LieAlgebra
from .connections import (ConnectionCoeffs, DifferenceTensor, difference_tensor,
                          dual_connection, duality_defect, levi_civita, nabla_cubic,
                          nabla_K, statistical_connection, torsion_defect)
from .scalar import (einsum, fmt, is_exact, is_zero, max_abs, resolve_eps, unify,
                     zeros)
from .symtensor import CURVATURE, GENERAL, CubicForm, FourTensor, total_symmetry_defect

# floating-mode verification of extracted constants uses a looser tolerance
VERIFY_FACTOR = 8


def curvature(conn: ConnectionCoeffs, alg: LieAlgebra) -> FourTensor:
    """``R_ijkl = sum_u (G_jk^u G_iu^l - G_ik^u G_ju^l - a_ij^u G_uk^l)``.

    The result is tagged ``curvature`` when its pair symmetries hold and
    ``general`` otherwise.
    """
    _, (g, a) = unify(conn.gamma, alg.a)
    r = (einsum("jku,iul->ijkl", g, g)
         - einsum("iku,jul->ijkl", g, g)
         - einsum("iju,ukl->ijkl", a, g))
    T = FourTensor(r, CURVATURE)
    return T if T.holds() else FourTensor(r, GENERAL)


def kk_bracket(K: DifferenceTensor) -> FourTensor:
    """``[K,K]_ijkl = (K_j K_i - K_i K_j)_kl``."""
    k = K.k
    r = einsum("jkm,iml->ijkl", k, k) - einsum("ikm,jml->ijkl", k, k)
    return FourTensor(r, CURVATURE)


def cs_curvature(R0: FourTensor, K: DifferenceTensor) -> FourTensor:
    """``R0 + [K,K]``; equals the curvature of the statistical connection only
    for conjugate symmetric structures."""
    _, (r0, kk) = unify(R0.t, kk_bracket(K).t)
    return FourTensor(r0 + kk, CURVATURE)


def sectional(R: FourTensor, v, w, eps: float | None = None):
    """``R(v, w, w, v) / (|v|^2 |w|^2 - <v,w>^2)`` in the orthonormal frame."""
    v, w = np.asarray(v), np.asarray(w)
    exact, (t, v, w) = unify(R.t, v, w)
    den = einsum("i,i->", v, v)[()] * einsum("i,i->", w, w)[()] - einsum("i,i->", v, w)[()] ** 2
    if is_zero(den, eps):
        raise ValueError("vectors are linearly dependent")
    num = einsum("ijkl,i,j,k,l->", t, v, w, w, v)[()]
    return num / den


def _verified(resid, eps) -> bool:
    return is_zero(resid, eps, scale=VERIFY_FACTOR)


def is_flat(R: FourTensor, eps: float | None = None) -> bool:
    return is_zero(max_abs(R.t), eps)


def constant_curvature_model(n: int, k, exact: bool) -> np.ndarray:
    """``k (delta_jk delta_il - delta_ik delta_jl)``."""
    t = zeros((n, n, n, n), exact)
    for i in range(n):
        for j in range(n):
            if i != j:
                t[i, j, j, i] += k
                t[i, j, i, j] -= k
    return t


def constant_curvature(R: FourTensor, eps: float | None = None):
    """Constant k with ``R(X,Y)Z = k(g(Y,Z)X - g(X,Z)Y)``, or None.

    The candidate is read from ``R[0,1,0,1] = -k`` and then checked on all
    entries.  Undefined (None) in dimension 1.
    """
    if R.n < 2:
        return None
    k = -R.t[0, 1, 0, 1]
    resid = max_abs(R.t - constant_curvature_model(R.n, k, R.exact))
    return k if _verified(resid, eps) else None


def chc_model(n: int, c, exact: bool) -> np.ndarray:
    """``-(c/2)(delta_ti delta_jl + delta_tj delta_il)`` indexed ``[t, i, j, l]``."""
    half = c * Fraction(1, 2) if exact else c / 2
    t = zeros((n, n, n, n), exact)
    for a in range(n):
        for b in range(n):
            t[a, a, b, b] -= half
            t[a, b, a, b] -= half
    return t


def chc_constant(nK: np.ndarray, alg: LieAlgebra | None = None, eps: float | None = None):
    """Constant c with ``(nabla_X K)(Y,Z) = -(c/2)(g(X,Y)Z + g(X,Z)Y)``, or None.

    The candidate is ``-N[0,0,0,0]`` and every entry is then verified.
    """
    nK = np.asarray(nK)
    n = nK.shape[0]
    if alg is not None and alg.n != n:
        raise ValueError("dimension mismatch")
    c = -nK[0, 0, 0, 0]
    resid = max_abs(nK - chc_model(n, c, is_exact(nK)))
    return c if _verified(resid, eps) else None


def is_conjugate_symmetric(alg: LieAlgebra, C: CubicForm, eps: float | None = None) -> bool:
    """Whether the Levi-Civita derivative of C is totally symmetric."""
    return is_zero(total_symmetry_defect(nabla_cubic(levi_civita(alg), C)), eps)


@dataclass
class StructureReport:
    conjugate_symmetric: bool
    dually_flat: bool
    constant_curvature: Any
    chc: Any
    curvature_tensor: FourTensor
    defects: dict[str, Any] = field(default_factory=dict)
    cs_dimension: int | None = None

    def to_record(self) -> dict:
        def out(v):
            return None if v is None else fmt(v)
        return {
            "cs": self.conjugate_symmetric,
            "df": self.dually_flat,
            "constant_curvature": out(self.constant_curvature),
            "chc": out(self.chc),
            "cs_dimension": self.cs_dimension,
            "defects": {k: fmt(v) for k, v in sorted(self.defects.items())},
        }

    def flags(self) -> tuple:
        return (self.conjugate_symmetric, self.dually_flat,
                self.constant_curvature, self.chc)


def structure_report(alg: LieAlgebra, C: CubicForm, eps: float | None = None,
                     cs_dimension: int | None = None) -> StructureReport:
    """Classify (alg, C) using the direct curvature formula.

    The CHC constant is only looked for on dually flat structures, and
    constant curvature only on conjugate symmetric ones, so the flags are
    nested by construction.
    """
    if not alg.exact or not C.exact:
        alg = alg if not alg.exact else alg.to_float()
        C = C if not C.exact else C.to_float()
    eps = resolve_eps(eps)
    lc = levi_civita(alg)
    K = difference_tensor(C)
    conn = statistical_connection(lc, K)
    dual = dual_connection(lc, K)
    R = curvature(conn, alg)
    sym = total_symmetry_defect(nabla_cubic(lc, C))
    cs = is_zero(sym, eps)
    curv_max = max_abs(R.t)
    df = cs and is_zero(curv_max, eps)
    k = constant_curvature(R, eps) if cs else None
    nK = nabla_K(conn, K)
    c = chc_constant(nK, alg, eps) if df else None
    defects = {
        "symmetry": sym,
        "curvature_max": curv_max,
        "torsion": torsion_defect(conn, alg),
        "duality": duality_defect(conn, dual),
    }
    if R.n >= 2:
        k0 = -R.t[0, 1, 0, 1]
        defects["constant_curvature"] = max_abs(R.t - constant_curvature_model(R.n, k0, R.exact))
    c0 = -nK[0, 0, 0, 0]
    defects["chc"] = max_abs(nK - chc_model(R.n, c0, is_exact(nK)))
    return StructureReport(cs, df, k, c, R, defects, cs_dimension)


def statistical_curvatures(alg: LieAlgebra, C: CubicForm) -> tuple[FourTensor, FourTensor]:
    """Curvatures of the statistical connection and of its dual."""
    lc = levi_civita(alg)
    K = difference_tensor(C)
    return (curvature(statistical_connection(lc, K), alg),
            curvature(dual_connection(lc, K), alg))

