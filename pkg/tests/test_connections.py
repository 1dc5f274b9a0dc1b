import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _support import almost_abelian, random_cubic
from listat.algebra import build_builtin, from_brackets
from listat.classify import reference_generators
from listat.connections import (ConnectionCoeffs, difference_tensor, dual_connection,
                                duality_defect, levi_civita, metric_compat_cubic, nabla_cubic,
                                nabla_K, statistical_connection, torsion_defect)
from listat.gaussian import c_alpha
from listat.scalar import zeros
from listat.symtensor import CubicForm, cubic_from_polynomial, quartic_from_polynomial

HALF = Fraction(1, 2)


class TestLeviCivita:
    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_rhn(self, n):
        g = levi_civita(build_builtin("rhn", n)).gamma
        want = zeros((n, n, n), True)
        for t in range(1, n):
            want[t, 0, t] = Fraction(-1)
            want[t, t, 0] = Fraction(1)
        assert (g == want).all()

    @pytest.mark.parametrize("n", [3, 4])
    def test_heisenberg(self, n):
        g = levi_civita(build_builtin("heisenberg_product", n)).gamma
        want = zeros((n, n, n), True)
        for (i, j, k), v in {(1, 2, 3): HALF, (2, 3, 1): HALF, (3, 2, 1): HALF,
                             (1, 3, 2): -HALF, (2, 1, 3): -HALF, (3, 1, 2): -HALF}.items():
            want[i - 1, j - 1, k - 1] = v
        assert (g == want).all()

    def test_abelian(self):
        assert (levi_civita(build_builtin("abelian", 3)).gamma == 0).all()

    def test_needs_orthonormal_frame(self):
        alg = from_brackets(2, {(1, 2, 2): 1}, orthonormal=False)
        with pytest.raises(ValueError, match="orthonormal"):
            levi_civita(alg)


class TestDifferenceTensor:
    def test_c_alpha(self):
        a = Fraction(5, 3)
        K = difference_tensor(c_alpha(3, a, True)).matrices
        assert [K[0][i, i] for i in range(3)] == [-2 * a, -a, -a]
        for u in (1, 2):
            want = zeros((3, 3), True)
            want[0, u] = want[u, 0] = -a
            assert (K[u] == want).all()

    def test_diagonal(self):
        lam = [Fraction(2), Fraction(-3), Fraction(1, 2)]
        C = cubic_from_polynomial({(i + 1,) * 3: v for i, v in enumerate(lam)}, 3)
        K = difference_tensor(C).matrices
        for i, v in enumerate(lam):
            want = zeros((3, 3), True)
            want[i, i] = -v / 2
            assert (K[i] == want).all()

    def test_zero(self):
        assert (difference_tensor(CubicForm.zero(3)).k == 0).all()


class TestConnections:
    def test_zero_difference(self):
        lc = levi_civita(build_builtin("rhn", 3))
        conn = statistical_connection(lc, difference_tensor(CubicForm.zero(3)))
        assert (conn.gamma == lc.gamma).all()

    def test_abelian_diagonal(self):
        lam = [Fraction(2), Fraction(6)]
        C = cubic_from_polynomial({(1, 1, 1): lam[0], (2, 2, 2): lam[1]}, 2)
        g = statistical_connection(levi_civita(build_builtin("abelian", 2)), difference_tensor(C)).gamma
        for idx in np.ndindex(2, 2, 2):
            want = -lam[idx[0]] / 2 if len(set(idx)) == 1 else 0
            assert g[idx] == want

    def test_rhn2_c1(self):
        lc = levi_civita(build_builtin("rhn", 2))
        conn = statistical_connection(lc, difference_tensor(c_alpha(2, 1, True)))
        assert conn.gamma[0, 0, 0] == -2

    def test_torsion(self):
        alg = build_builtin("rhn", 4)
        assert torsion_defect(levi_civita(alg), alg) == 0
        raw = zeros((2, 2, 2), True)
        raw[0, 1, 0] = Fraction(1)
        assert torsion_defect(ConnectionCoeffs(raw), build_builtin("abelian", 2)) == 1

    def test_metric_compatibility(self):
        assert (metric_compat_cubic(levi_civita(build_builtin("heisenberg3", 3))) == 0).all()
        alg = build_builtin("rhn", 2)
        C = c_alpha(2, Fraction(3, 4), True)
        lc, K = levi_civita(alg), difference_tensor(C)
        assert (metric_compat_cubic(statistical_connection(lc, K)) == C.c).all()
        assert (metric_compat_cubic(dual_connection(lc, K)) == -C.c).all()


class TestNablaCubic:
    def test_abelian(self):
        C = random_cubic(3, random.Random(9))
        assert (nabla_cubic(levi_civita(build_builtin("abelian", 3)), C).t == 0).all()

    @pytest.mark.parametrize("n", [2, 3, 4])
    @pytest.mark.parametrize("alpha", [Fraction(1), Fraction(-2, 3)])
    def test_rhn_closed_form(self, n, alpha):
        got = nabla_cubic(levi_civita(build_builtin("rhn", n)), c_alpha(n, alpha, True))
        # -6 alpha (sum_{i>=2} x_i^2)^2
        view = {}
        for i in range(2, n + 1):
            view[(i,) * 4] = -6 * alpha
            for j in range(i + 1, n + 1):
                view[(i, i, j, j)] = -12 * alpha
        assert (got.t == quartic_from_polynomial(view, n).t).all()

    @pytest.mark.parametrize("n", [4, 5])
    def test_heisenberg_parallel(self, n):
        alg = build_builtin("heisenberg_product", n)
        lc = levi_civita(alg)
        for C in reference_generators("heisenberg_product", n):
            assert (nabla_cubic(lc, C).t == 0).all()


class TestNablaK:
    def test_zero(self):
        lc = levi_civita(build_builtin("rhn", 3))
        K = difference_tensor(CubicForm.zero(3))
        assert (nabla_K(statistical_connection(lc, K), K) == 0).all()

    def test_rhn_c1(self):
        lc = levi_civita(build_builtin("rhn", 3))
        K = difference_tensor(c_alpha(3, 1, True))
        N = nabla_K(statistical_connection(lc, K), K)
        assert list(N[0, 0, 0, :]) == [-4, 0, 0]

    def test_abelian_forces_zero_constant(self):
        C = cubic_from_polynomial({(1, 1, 1): 2, (2, 2, 2): 2}, 2)
        lc = levi_civita(build_builtin("abelian", 2))
        K = difference_tensor(C)
        N = nabla_K(statistical_connection(lc, K), K)
        assert list(N[1, 1, 0, :]) == [0, 0]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 4))
def test_dual_pair_closure(seed, n):
    rng = random.Random(seed)
    alg = almost_abelian(n, rng)
    C = random_cubic(n, rng)
    lc, K = levi_civita(alg), difference_tensor(C)
    conn, dual = statistical_connection(lc, K), dual_connection(lc, K)
    assert torsion_defect(lc, alg) == 0
    assert torsion_defect(conn, alg) == 0
    assert torsion_defect(dual, alg) == 0
    assert (metric_compat_cubic(conn) == C.c).all()
    assert ((conn.gamma + dual.gamma) / 2 == lc.gamma).all()
    assert duality_defect(conn, dual) == 0
    assert K.symmetry_defect() == 0
