import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _support import almost_abelian, cayley, random_cubic, random_orthogonal
from listat.algebra import ValidationError, build_builtin
from listat.connections import levi_civita, nabla_cubic
from listat.curvature import curvature
from listat.gaussian import c_alpha
from listat.scalar import einsum
from listat.symtensor import (CURVATURE, NABLA_C, CubicForm, FourTensor, OrthogonalMap,
                              act_isotropy, conjugate_four, cubic_from_polynomial,
                              cubic_from_record, format_polynomial, monomials,
                              omega_coefficients, omega_reconstruct, polynomial_from_cubic,
                              total_symmetry_defect)


class TestPolynomialConvention:
    def test_c_alpha_components(self):
        a = Fraction(3, 2)
        C = cubic_from_polynomial({(1, 1, 1): 4 * a, (1, 2, 2): 6 * a}, 2)
        assert C[0, 0, 0] == 4 * a
        assert C[0, 1, 1] == C[1, 0, 1] == C[1, 1, 0] == 2 * a

    def test_triple_product(self):
        C = cubic_from_polynomial({(1, 2, 3): 1}, 3)
        for p in itertools.permutations((0, 1, 2)):
            assert C[p] == Fraction(1, 6)

    def test_zero(self):
        assert cubic_from_polynomial({}, 3) == CubicForm.zero(3)
        assert polynomial_from_cubic(CubicForm.zero(3)) == {}

    def test_inverse_examples(self):
        C = CubicForm.from_components(3, {(1, 1, 1): 4, (1, 2, 2): 2, (1, 3, 3): 2})
        assert format_polynomial(polynomial_from_cubic(C)) == "4x1^3 + 6x1x2^2 + 6x1x3^2"
        D = CubicForm.from_components(3, {(1, 2, 3): Fraction(1, 6)})
        assert polynomial_from_cubic(D) == {(1, 2, 3): 1}

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            cubic_from_polynomial({(1, 1, 4): 1}, 3)

    def test_monomial_order(self):
        assert monomials(2) == [(1, 1, 1), (1, 1, 2), (1, 2, 2), (2, 2, 2)]
        assert len(monomials(5)) == 35

    def test_format(self):
        view = {(1, 1, 1): Fraction(-3, 2), (2, 2, 3): Fraction(1), (1, 2, 3): Fraction(-1)}
        assert format_polynomial(view) == "-(3/2)x1^3 - x1x2x3 + x2^2x3"
        assert format_polynomial({}) == "0"

    def test_rejects_asymmetric(self):
        c = np.zeros((2, 2, 2))
        c[0, 0, 1] = 1.0
        with pytest.raises(ValueError):
            CubicForm(c)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 5))
def test_polynomial_round_trip(seed, n):
    C = random_cubic(n, random.Random(seed))
    assert cubic_from_polynomial(polynomial_from_cubic(C), n) == C


class TestRecord:
    def test_tensor_basis_matches_polynomial(self):
        a = cubic_from_record({"basis": "tensor", "terms": [{"monomial": [1, 2, 2], "c": "2"}]}, 2)
        b = cubic_from_record({"basis": "polynomial", "terms": [{"monomial": [1, 2, 2], "c": "6"}]}, 2)
        assert a == b

    @pytest.mark.parametrize("record, path", [
        ({"basis": "poly", "terms": []}, "cubic.basis"),
        ({"terms": [{"monomial": [1, 2], "c": "1"}]}, "cubic.terms[0].monomial"),
        ({"terms": [{"monomial": [1, 2, 9], "c": "1"}]}, "cubic.terms[0].monomial"),
        ({"terms": [{"monomial": [1, 2, 2], "c": "1/0"}]}, "cubic.terms[0].c"),
        ({"terms": [{"monomial": [1, 2, 2]}]}, "cubic.terms[0].c"),
        ({"terms": 3}, "cubic.terms"),
    ])
    def test_validation(self, record, path):
        with pytest.raises(ValidationError) as err:
            cubic_from_record(record, 3)
        assert err.value.path == path


class TestIsotropyAction:
    def test_identity(self):
        C = random_cubic(3, random.Random(1))
        assert act_isotropy(1, np.eye(3, dtype=int).astype(object) * Fraction(1), C) == C

    def test_scaling(self):
        C = random_cubic(3, random.Random(2))
        one = np.eye(3).astype(object) * Fraction(1)
        assert act_isotropy(Fraction(5, 2), one, C) == C * Fraction(5, 2)

    def test_c_alpha_block_invariant(self):
        h = np.eye(4).astype(object) * Fraction(1)
        h[1:, 1:] = cayley(3, random.Random(5))
        C = c_alpha(4, Fraction(7, 3), exact=True)
        assert act_isotropy(1, h, C) == C

    def test_rejects_non_orthogonal(self):
        with pytest.raises(ValueError, match="orthogonal"):
            OrthogonalMap(np.array([[1.0, 0.1], [0.0, 1.0]]))
        with pytest.raises(ValueError):
            act_isotropy(0, np.eye(2), CubicForm.zero(2, exact=False))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 5))
def test_action_group_law_and_linearity(seed, n):
    rng = random.Random(seed)
    nrng = np.random.default_rng(seed)
    h1, h2 = random_orthogonal(n, nrng), random_orthogonal(n, nrng)
    r1, r2 = rng.uniform(0.2, 3), rng.uniform(0.2, 3)
    C, D = random_cubic(n, rng).to_float(), random_cubic(n, rng).to_float()
    lhs = act_isotropy(r2, h2, act_isotropy(r1, h1, C))
    rhs = act_isotropy(r1 * r2, h2 @ h1, C)
    assert lhs.close_to(rhs, 1e-9)
    assert act_isotropy(1, h1, C + D).close_to(act_isotropy(1, h1, C) + act_isotropy(1, h1, D), 1e-9)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 4))
def test_action_group_law_exact(seed, n):
    rng = random.Random(seed)
    h1, h2 = cayley(n, rng), cayley(n, rng)
    C = random_cubic(n, rng)
    lhs = act_isotropy(2, h2, act_isotropy(3, h1, C))
    assert lhs == act_isotropy(6, einsum("ij,jk->ik", h2, h1), C)


class TestSymmetryDefect:
    def test_abelian_zero(self):
        alg = build_builtin("abelian", 3)
        C = random_cubic(3, random.Random(4))
        assert total_symmetry_defect(nabla_cubic(levi_civita(alg), C)) == 0

    def test_c_alpha_zero(self):
        alg = build_builtin("rhn", 4)
        assert total_symmetry_defect(nabla_cubic(levi_civita(alg), c_alpha(4, 3, True))) == 0

    def test_x1_cubed_positive(self):
        alg = build_builtin("rhn", 2)
        C = cubic_from_polynomial({(1, 1, 1): 1}, 2)
        assert total_symmetry_defect(nabla_cubic(levi_civita(alg), C)) > 0

    def test_wrong_class(self):
        with pytest.raises(ValueError):
            total_symmetry_defect(FourTensor(np.zeros((2,) * 4), CURVATURE))


def _frobenius_defect(T: FourTensor):
    d = T.t - T.t.transpose(0, 1, 3, 2)
    return sum(x * x for x in d.reshape(-1))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 4))
def test_symmetry_defect_orthogonal_invariance(seed, n):
    # the max-norm is frame dependent; zero-ness and the Frobenius norm are not
    rng = random.Random(seed)
    alg = almost_abelian(n, rng)
    C = random_cubic(n, rng)
    T = nabla_cubic(levi_civita(alg), C)
    h = cayley(n, rng)
    U = conjugate_four(T, h)
    assert U.holds()
    assert _frobenius_defect(U) == _frobenius_defect(T)
    assert (total_symmetry_defect(U) == 0) == (total_symmetry_defect(T) == 0)


class TestOmega:
    def test_rhn3(self):
        R0 = curvature(levi_civita(build_builtin("rhn", 3)), build_builtin("rhn", 3))
        coeffs = omega_coefficients(R0)
        diag = {((1, 2), (1, 2)), ((1, 3), (1, 3)), ((2, 3), (2, 3))}
        for key, v in coeffs.items():
            assert v == (1 if key in diag else 0)

    def test_heisenberg3(self):
        alg = build_builtin("heisenberg3", 3)
        coeffs = omega_coefficients(curvature(levi_civita(alg), alg))
        assert coeffs[((1, 2), (1, 2))] == Fraction(3, 4)
        assert coeffs[((1, 3), (1, 3))] == Fraction(-1, 4)
        assert coeffs[((2, 3), (2, 3))] == Fraction(-1, 4)
        others = [v for k, v in coeffs.items() if k[0] != k[1]]
        assert all(v == 0 for v in others)

    def test_zero(self):
        assert all(v == 0 for v in omega_coefficients(FourTensor(np.zeros((3,) * 4), CURVATURE)).values())

    def test_wrong_class(self):
        with pytest.raises(ValueError):
            omega_coefficients(FourTensor(np.zeros((2,) * 4), NABLA_C))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 5))
def test_omega_round_trip(seed, n):
    rng = random.Random(seed)
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    coeffs = {(p, q): Fraction(rng.randint(-5, 5), rng.randint(1, 3))
              for a, p in enumerate(pairs) for q in pairs[a:]}
    T = omega_reconstruct(coeffs, n)
    assert T.kind == CURVATURE and T.holds()
    assert omega_coefficients(T) == coeffs
