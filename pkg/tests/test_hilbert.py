import random
from fractions import Fraction

import pytest

from qal.errors import DomainError, SelectionFailure, UnsupportedSequenceError
from qal.hilbert import (build_model, divergence_demo, lacunary_select,
                         ldl_decompose, minimal_interpolant, omega_table,
                         poly_derivative, representer, sobolev_check)
from qal.rationals import factorial
from qal.sequences import analytic, gevrey, loggevrey


class TestBuildModel:
    def test_analytic_d1_gram_hand_integrated(self):
        # oracle: hand integration, cross-checked by symbolic integration
        model = build_model(analytic(), 1)
        assert model.gram[0][0] == 2
        assert model.gram[1][1] == Fraction(8, 3)
        assert model.gram[0][1] == 0

    def test_analytic_d2_gram_frozen_oracle(self):
        # frozen from an independent symbolic-integration dense computation
        model = build_model(analytic(), 2)
        assert model.gram == [
            [Fraction(2), Fraction(0), Fraction(2, 3)],
            [Fraction(0), Fraction(8, 3), Fraction(0)],
            [Fraction(2, 3), Fraction(0), Fraction(76, 15)],
        ]

    def test_gevrey1_d2_corner(self):
        model = build_model(gevrey(1), 2)
        assert model.gram[0][0] == 2  # only the j=0 term, weight 1

    def test_parity_zeros(self):
        model = build_model(gevrey(1), 6)
        for a in range(7):
            for b in range(7):
                if (a + b) % 2 == 1:
                    assert model.gram[a][b] == 0

    def test_spd_certified_by_ldl(self):
        for D in (1, 4, 9, 12):
            model = build_model(gevrey(1), D)
            L, piv = ldl_decompose(model.gram)
            assert all(p > 0 for p in piv)

    def test_irrational_sequence_rejected(self):
        with pytest.raises(UnsupportedSequenceError):
            build_model(loggevrey(1), 3)


class TestRepresenter:
    def test_analytic_d1_constant(self):
        model = build_model(analytic(), 1)
        assert representer(model, 0) == [Fraction(1, 2), Fraction(0)]

    def test_analytic_d1_linear(self):
        model = build_model(analytic(), 1)
        e1 = representer(model, 1)
        assert e1 == [Fraction(0), Fraction(3, 8)]
        # <e_1|x> = (x)'(0) = 1
        assert model.inner(e1, [Fraction(0), Fraction(1)]) == 1

    def test_reproducing_identity_is_symmetric(self):
        model = build_model(gevrey(1), 6)
        reps = [representer(model, i) for i in range(7)]
        for i in range(7):
            for j in range(7):
                lhs = model.inner(reps[i], reps[j])
                assert lhs == model.deriv_at_zero(reps[j], i)
                assert lhs == model.inner(reps[j], reps[i])

    def test_reproducing_on_random_polynomials(self):
        rng = random.Random(20240811)
        model = build_model(gevrey(1), 8)
        reps = [representer(model, i) for i in range(9)]
        for _ in range(50):
            u = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(9)]
            gu = [sum(model.gram[a][b] * u[b] for b in range(9)) for a in range(9)]
            for i in range(9):
                got = sum(reps[i][a] * gu[a] for a in range(9))
                assert got == factorial(i) * u[i]


class TestMinimalInterpolant:
    def test_zero_data(self):
        model = build_model(analytic(), 4)
        out = minimal_interpolant(model, [Fraction(0)] * 3)
        assert all(c == 0 for c in out.coeffs)
        assert out.norm_sq == 0

    def test_empty_data_defined_as_zero(self):
        model = build_model(analytic(), 3)
        out = minimal_interpolant(model, [])
        assert all(c == 0 for c in out.coeffs)

    def test_full_rank_pins_monomial(self):
        model = build_model(gevrey(1), 5)
        for m in (0, 2, 5):
            b = [Fraction(0)] * 6
            b[m] = Fraction(factorial(m))  # derivatives of x^m at 0
            out = minimal_interpolant(model, b)
            expected = [Fraction(0)] * 6
            expected[m] = Fraction(1)
            assert out.coeffs == expected

    def test_analytic_d2_k1_frozen_golden(self):
        # frozen from the independent symbolic-integration dense solve
        model = build_model(analytic(), 2)
        out = minimal_interpolant(model, [Fraction(1)])
        assert out.coeffs == [Fraction(1), Fraction(0), Fraction(-5, 38)]

    def test_pythagoras_identity_and_minimality(self):
        rng = random.Random(986523)
        model = build_model(gevrey(1), 7)
        for k in (1, 3, 5):
            b = [Fraction(rng.randint(-5, 5)) for _ in range(k)]
            g = minimal_interpolant(model, b)
            for _ in range(20):
                # feasible perturbation: vanishing derivatives below order k
                w = [Fraction(0)] * k + [Fraction(rng.randint(-7, 7), rng.randint(1, 5))
                                         for _ in range(8 - k)]
                u = [g.coeffs[i] + w[i] for i in range(8)]
                nu = model.norm_sq(u)
                assert nu == g.norm_sq + model.norm_sq(w)  # exact Pythagoras
                assert nu >= g.norm_sq
                if any(w):
                    assert nu > g.norm_sq

    def test_too_many_constraints(self):
        model = build_model(analytic(), 2)
        with pytest.raises(DomainError):
            minimal_interpolant(model, [Fraction(1)] * 4)


class TestOmegaTable:
    def test_full_column_is_exactly_one(self):
        for D in (3, 6):
            model = build_model(gevrey(1), D)
            assert omega_table(model, D + 1) == [Fraction(1)] * (D + 1)

    def test_gevrey1_d8_k4_frozen_golden(self):
        # frozen from the independent symbolic-integration dense solve
        model = build_model(gevrey(1), 8)
        expected = [
            Fraction(17535916390827760780567015132129,
                     19873642344067166990508607408417),
            Fraction(186841119025923511, 270429475030534111),
            Fraction(3885040276479865049694841841473,
                     19873642344067166990508607408417),
            Fraction(62493724905305661, 270429475030534111),
        ]
        assert omega_table(model, 4) == expected

    def test_reconstruction_linearity(self):
        rng = random.Random(5150)
        model = build_model(gevrey(1), 6)
        k = 4
        omegas = omega_table(model, k)
        for _ in range(10):
            b = [Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(k)]
            g = minimal_interpolant(model, b)
            expected = sum(omegas[j] * b[j] / factorial(j) for j in range(k))
            assert g.value_at(Fraction(1)) == expected


class TestLacunary:
    def test_pinned_schedule_has_zero_sums(self):
        schedule = [(2, 3), (4, 5), (8, 9)]
        out = lacunary_select(gevrey(1), schedule)
        assert out.sums == [Fraction(0), Fraction(0)]

    def test_single_element_schedule_trivially_valid(self):
        out = lacunary_select(gevrey(1), [(4, 2)])
        assert out.sums == []

    def test_doubling_schedule_fails_in_finite_model(self):
        # recorded outcome: D_p = 2 k_p, k_p = 2^p is too lax at p = 2;
        # the exact sum there is about 2.04 > 1 (independent dense solve)
        schedule = [(2, 1), (4, 2), (8, 4), (16, 8)]
        with pytest.raises(SelectionFailure):
            lacunary_select(gevrey(1), schedule)

    def test_non_increasing_ks_rejected(self):
        with pytest.raises(DomainError):
            lacunary_select(gevrey(1), [(4, 3), (4, 3)])


class TestDivergenceDemo:
    def test_gevrey1_crossing_frozen_index(self):
        # oracle: exact partial sums of q!/2^q cross 10^6 at p = 14
        total = Fraction(0)
        expected_index = None
        for q in range(40):
            total += Fraction(factorial(q), 2**q)
            if total > 10**6:
                expected_index = q
                break
        assert expected_index == 14
        out = divergence_demo(gevrey(1), Fraction(1, 2), list(range(40)), 10**6)
        assert out.crossed and out.index == 14

    def test_analytic_exhausts_below_geometric_bound(self):
        out = divergence_demo(analytic(), Fraction(1, 2), list(range(30)), 10)
        assert not out.crossed
        assert out.partial_sums[-1] < 2

    def test_zero_threshold_crosses_immediately(self):
        out = divergence_demo(gevrey(1), Fraction(1, 2), [0, 1, 2], 0)
        assert out.crossed and out.index == 0


class TestSobolev:
    def test_constant(self):
        rec = sobolev_check([Fraction(1)], 0)
        assert rec.l2_sq == 2
        assert rec.sup_lower == 1
        assert rec.left_ok and rec.right_ok

    def test_zero(self):
        rec = sobolev_check([Fraction(0), Fraction(0)], 0)
        assert rec.left_ok and rec.right_ok
        assert rec.l2_sq == 0

    def test_linear(self):
        rec = sobolev_check([Fraction(0), Fraction(1)], 0)
        assert rec.l2_sq == Fraction(2, 3)
        assert rec.l2_next_sq == 2
        assert rec.sup_lower == 1
        assert rec.left_ok and rec.right_ok

    def test_higher_derivative_of_cubic(self):
        # u = x^3: u'' = 6x
        rec = sobolev_check([0, 0, 0, Fraction(1)], 2)
        assert rec.l2_sq == 24  # int (6x)^2 = 36 * 2/3
        assert rec.left_ok and rec.right_ok

    def test_derivative_helper(self):
        assert poly_derivative([Fraction(1), Fraction(2), Fraction(3)], 1) == \
            [Fraction(2), Fraction(6)]
