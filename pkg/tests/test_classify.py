import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _support import almost_abelian, cayley, random_cubic, random_orthogonal
from listat.algebra import UnsupportedError, build_builtin, from_brackets
from listat.classify import (ABELIAN_FAMILY, DFOptions, DiagonalSpectrum, abelian_df_normal_form,
                             automorphism_defect, canonicalize_v, cs_subspace, df_check,
                             df_solutions, invariance_defect, isotropy_generators,
                             reference_generators, same_span, span_residual, spectrum_oracle)
from listat.curvature import is_conjugate_symmetric
from listat.gaussian import c_alpha
from listat.scalar import zeros
from listat.symtensor import CubicForm, act_isotropy, cubic_from_polynomial


def diagonal(lam, exact=True):
    return cubic_from_polynomial({(i + 1,) * 3: v for i, v in enumerate(lam)}, len(lam), exact)


class TestCSSubspace:
    @pytest.mark.parametrize("n", [2, 3])
    def test_rhn(self, n):
        basis = cs_subspace(build_builtin("rhn", n))
        assert basis.dimension == 1 and basis.aligned
        assert basis.forms[0] == c_alpha(n, 1, True)

    def test_rhn_polynomial_text(self):
        assert cs_subspace(build_builtin("rhn", 3)).polynomials() == ["4x1^3 + 6x1x2^2 + 6x1x3^2"]

    @pytest.mark.parametrize("n, dim", [(3, 0), (4, 2), (5, 6)])
    def test_heisenberg(self, n, dim):
        basis = cs_subspace(build_builtin("heisenberg_product", n))
        assert basis.dimension == dim == (n - 3) + math.comb(n - 1, 3)
        for C in basis.forms:
            assert span_residual(C, reference_generators("heisenberg_product", n)) == 0

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_abelian(self, n):
        assert cs_subspace(build_builtin("abelian", n)).dimension == math.comb(n + 2, 3)

    def test_rejects_float(self):
        with pytest.raises(ValueError, match="exact"):
            cs_subspace(build_builtin("rhn", 3, exact=False))

    def test_rejects_non_orthonormal(self):
        with pytest.raises(ValueError, match="orthonormal"):
            cs_subspace(from_brackets(2, {(1, 2, 2): 1}, orthonormal=False))

    def test_custom_algebra_echelon(self):
        alg = from_brackets(3, {(1, 2, 2): 1})
        basis = cs_subspace(alg)
        assert not basis.aligned
        assert basis.forms == basis.echelon
        assert basis.dimension == 3

    @settings(max_examples=15, deadline=None)
    @given(st.integers(0, 10**6), st.integers(2, 4))
    def test_basis_is_cs_and_complement_is_not(self, seed, n):
        rng = random.Random(seed)
        alg = almost_abelian(n, rng)
        basis = cs_subspace(alg)
        for C in basis.forms:
            assert is_conjugate_symmetric(alg, C)
        for _ in range(3):
            C = random_cubic(n, rng)
            inside = basis.dimension > 0 and span_residual(C, basis.forms) == 0
            assert is_conjugate_symmetric(alg, C) == (inside or basis.dimension == math.comb(n + 2, 3))

    def test_same_span(self):
        a = [c_alpha(3, 1, True)]
        assert same_span(a, [c_alpha(3, Fraction(-2, 3), True)])
        assert not same_span(a, [diagonal([1, 0, 0])])


class TestDFCheck:
    @pytest.mark.parametrize("n", [2, 4])
    def test_rhn(self, n):
        alg = build_builtin("rhn", n)
        assert df_check(alg, c_alpha(n, 1, True))
        assert df_check(alg, c_alpha(n, -1, True))
        assert not df_check(alg, c_alpha(n, 2, True))

    def test_abelian_diagonal(self):
        assert df_check(build_builtin("abelian", 3), diagonal([3, -1, Fraction(1, 2)]))


class TestDFSolutions:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_rhn(self, n):
        res = df_solutions(build_builtin("rhn", n))
        assert res.method == "line"
        assert res.forms == [c_alpha(n, -1, True), c_alpha(n, 1, True)]
        for C in res.forms:
            assert C.exact and df_check(build_builtin("rhn", n), C)

    def test_rhn_newton_agrees(self):
        res = df_solutions(build_builtin("rhn", 3), DFOptions(force_newton=True))
        assert res.method == "newton"
        assert res.forms == [c_alpha(3, -1, True), c_alpha(3, 1, True)]

    def test_heisenberg3(self):
        res = df_solutions(build_builtin("heisenberg3", 3))
        assert res.empty and res.cs_dimension == 0 and res.lower_bound == Fraction(3, 4)

    @pytest.mark.parametrize("n", [4, 5])
    def test_heisenberg_product(self, n):
        res = df_solutions(build_builtin("heisenberg_product", n))
        assert res.empty and res.method == "certificate" and res.lower_bound == Fraction(1, 4)

    def test_abelian(self):
        res = df_solutions(build_builtin("abelian", 3))
        assert res.family is not None and res.family.description == ABELIAN_FAMILY

    def test_newton_isolated_roots(self):
        alg = from_brackets(4, {(1, 2, 2): 1, (3, 4, 4): 1})
        res = df_solutions(alg)
        assert res.method == "newton" and len(res.forms) == 4
        assert all(C.exact and df_check(alg, C) for C in res.forms)
        # the block swap e1<->e3, e2<->e4 is an orthogonal automorphism; it permutes the roots
        h = zeros((4, 4), True)
        for a, b in ((0, 2), (2, 0), (1, 3), (3, 1)):
            h[a, b] = Fraction(1)
        assert automorphism_defect(alg, h) == 0
        images = [act_isotropy(1, h, C) for C in res.forms]
        assert sorted(map(str, (i.c.tolist() for i in images))) == sorted(
            map(str, (C.c.tolist() for C in res.forms)))

    def test_non_isolated_family(self):
        res = df_solutions(from_brackets(3, {(1, 2, 2): 1}))
        assert res.family is not None and res.forms == []
        assert df_check(from_brackets(3, {(1, 2, 2): 1}), res.family.sample)

    def test_dimension_cap(self):
        with pytest.raises(UnsupportedError, match="df_check"):
            df_solutions(from_brackets(4, {(1, 2, 2): 1}))

    def test_isotropy_preserves_solution_set(self):
        n = 4
        res = df_solutions(build_builtin("rhn", n))
        for h in isotropy_generators("rhn", n).maps:
            assert {str(act_isotropy(1, h, C).c.tolist()) for C in res.forms} == \
                   {str(C.c.tolist()) for C in res.forms}


class TestAbelianNormalForm:
    def test_standard_frame(self):
        spectrum = abelian_df_normal_form(diagonal([Fraction(-1), Fraction(3), Fraction(2)]))
        assert spectrum.values == (3, 2, 1) and spectrum.is_canonical()

    def test_not_dually_flat(self):
        assert abelian_df_normal_form(cubic_from_polynomial({(1, 2, 3): 1}, 3)) is None

    def test_rotated_exact(self):
        h = cayley(2, random.Random(7))
        C = act_isotropy(1, h, diagonal([2, 1]))
        assert abelian_df_normal_form(C).values == (2, 1)

    def test_rotated_float(self):
        h = random_orthogonal(2, np.random.default_rng(3))
        C = act_isotropy(1, h, diagonal([2.0, 1.0], exact=False))
        got = abelian_df_normal_form(C).values
        assert max(abs(a - b) for a, b in zip(got, (2, 1))) < 1e-8

    def test_repeated_and_zero_eigenvalues(self):
        h = cayley(4, random.Random(12))
        C = act_isotropy(1, h, diagonal([3, 3, 0, -1]))
        assert abelian_df_normal_form(C).values == (3, 3, 1, 0)

    def test_to_cubic(self):
        assert DiagonalSpectrum((Fraction(2), Fraction(1))).to_cubic() == diagonal([2, 1])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 5))
def test_normal_form_scaling_and_rotation(seed, n):
    rng = random.Random(seed)
    lam = [Fraction(rng.randint(-9, 9), rng.randint(1, 3)) for _ in range(n)]
    h = random_orthogonal(n, np.random.default_rng(seed))
    r = rng.uniform(0.5, 3.0)
    C = act_isotropy(r, h, diagonal(lam, exact=False))
    got = abelian_df_normal_form(C).values
    want = canonicalize_v([r * float(x) for x in lam]).values
    assert max(abs(a - b) for a, b in zip(got, want)) < 1e-8
    # the oracle takes square roots of eigenvalues, so compare squares: sqrt is ill-conditioned at 0
    scale = max(1.0, max(x * x for x in want))
    assert max(abs(a * a - b * b) for a, b in zip(spectrum_oracle(C), want)) < 1e-10 * scale


class TestCanonicalize:
    def test_examples(self):
        assert canonicalize_v([-3, 1, 2]).values == (3, 2, 1)
        assert canonicalize_v([0, 0]).values == (0, 0)

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.fractions(-20, 20, max_denominator=9), min_size=1, max_size=6), st.randoms())
    def test_signed_permutation_invariance(self, lam, rnd):
        perm = list(range(len(lam)))
        rnd.shuffle(perm)
        moved = [lam[p] * rnd.choice((-1, 1)) for p in perm]
        assert canonicalize_v(moved) == canonicalize_v(lam)
        once = canonicalize_v(lam)
        assert canonicalize_v(once.values) == once


class TestIsotropy:
    @pytest.mark.parametrize("family, n", [("rhn", 2), ("rhn", 4), ("heisenberg_product", 3),
                                           ("heisenberg_product", 5), ("abelian", 3),
                                           ("heisenberg3", 3)])
    @pytest.mark.parametrize("exact", [True, False])
    def test_generators_are_automorphisms(self, family, n, exact):
        gens = isotropy_generators(family, n, exact)
        alg = build_builtin(family, n, exact)
        assert gens.maps
        for h in gens.maps:
            d = automorphism_defect(alg, h)
            assert d == 0 if exact else d < 1e-12
        assert gens.scaling_allowed == (family == "abelian")

    def test_heisenberg_reflection_sign(self):
        # a reflection in the (1,2)-plane must flip e3
        gens = isotropy_generators("heisenberg_product", 4)
        flips = [h for h in gens.maps if h.h[0, 0] == -1 and h.h[1, 1] == 1]
        assert flips and all(h.h[2, 2] == -1 for h in flips)

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            isotropy_generators("sl2", 3)


class TestInvariance:
    def test_c_alpha(self):
        assert invariance_defect(c_alpha(4, Fraction(5, 2), True), isotropy_generators("rhn", 4)) == 0

    def test_heisenberg_w0x4_up_to_sign(self):
        # e4 -> -e4 is an automorphism of the abelian factor, so w0 x4 is only fixed up to sign
        C = cubic_from_polynomial({(1, 1, 4): 1, (2, 2, 4): 1, (3, 3, 4): 1}, 4)
        gens = isotropy_generators("heisenberg_product", 4)
        assert invariance_defect(C, gens) > 0
        for h in gens.maps:
            assert act_isotropy(1, h, C) in (C, C * -1)

    def test_rotated_monomial(self):
        C = cubic_from_polynomial({(2, 2, 2): 1}, 3)
        h = zeros((3, 3), True)
        h[0, 0], h[1, 2], h[2, 1] = Fraction(1), Fraction(-1), Fraction(1)
        assert act_isotropy(1, h, C) != C
        assert invariance_defect(C, isotropy_generators("rhn", 3)) > 0

    @pytest.mark.parametrize("n", [4, 5, 6])
    def test_w0p1_block_invariant(self, n):
        view = {}
        for k in range(4, n + 1):
            for i in (1, 2, 3):
                view[(i, i, k)] = k - 2
        C = cubic_from_polynomial(view, n)
        block = isotropy_generators("heisenberg_product", n).supported_on(range(3))
        assert len(block.maps) >= 3
        assert invariance_defect(C, block) == 0

    def test_supported_on(self):
        gens = isotropy_generators("rhn", 4)
        assert gens.supported_on(range(4)).maps == gens.maps
        assert gens.supported_on([0]).maps == ()
        assert len(gens.supported_on([0, 1, 2]).maps) < len(gens.maps)

    def test_zero_is_invariant(self):
        assert invariance_defect(CubicForm.zero(3), isotropy_generators("abelian", 3)) == 0
