from fractions import Fraction

import pytest

from qal.errors import DomainError
from qal.rationals import factorial
from qal.sequences import analytic, gevrey, qgevrey
from qal.theta import (BorelExample, ThetaDerivative, borel_example_derivatives,
                       borel_example_eval, build_theta, theta_derivative_at_zero,
                       theta_eval)


def exact_partial_sum(M, j, K):
    """Independent oracle: sum_{k<=K} Mbar_k (2 m_k)^(j-k) in exact arithmetic."""
    mbar = [factorial(k) * M.exact_value(k) for k in range(K + 2)]
    total = Fraction(0)
    for k in range(K + 1):
        m_k = mbar[k + 1] / mbar[k]
        total += mbar[k] * (2 * m_k) ** (j - k)
    return total


class TestThetaDerivativeAtZero:
    def test_gevrey1_order0(self):
        out = theta_derivative_at_zero(gevrey(1), 0, 12)
        oracle = exact_partial_sum(gevrey(1), 0, 12)
        assert out.magnitude.lo <= oracle <= out.magnitude.hi
        assert out.magnitude.lo >= 1  # 0! * M_0

    def test_analytic_order0_partial_sum(self):
        # for the constant sequence, Mbar_k = k! and m_k = k+1
        out = theta_derivative_at_zero(analytic(), 0, 12)
        oracle = sum(Fraction(factorial(k), (2 * (k + 1)) ** k) for k in range(13))
        assert out.magnitude.lo <= oracle <= out.magnitude.hi
        assert out.magnitude.lo >= 1

    def test_single_term_lower_bound(self):
        # the k=j term alone is Mbar_j, so the bound holds for any order
        for j in (1, 3, 7):
            out = theta_derivative_at_zero(qgevrey(2), j, j + 9)
            mbar_j = factorial(j) * qgevrey(2).exact_value(j)
            assert out.magnitude.lo >= mbar_j

    def test_lower_bound_certified_through_order_20(self):
        for M in (gevrey(1), gevrey(2), qgevrey(2), analytic()):
            for j in range(21):
                out = theta_derivative_at_zero(M, j, j + 10)
                assert out.magnitude.lo >= factorial(j) * M.exact_value(j), (M, j)

    def test_requires_margin_over_order(self):
        with pytest.raises(DomainError):
            theta_derivative_at_zero(gevrey(1), 5, 12)

    def test_phase_structure(self):
        out = theta_derivative_at_zero(gevrey(1), 3, 14)
        box = out.interval()
        # i^3 * positive real lies on the negative imaginary axis
        assert box.re.contains(0) or box.re.hi < Fraction(1, 10**6)
        assert box.im.hi < 0

    def test_positivity_and_monotonicity_in_truncation(self):
        prev = None
        for K in (10, 13, 16, 20):
            out = theta_derivative_at_zero(gevrey(1), 2, K)
            if prev is not None:
                # nested: larger K shrinks the interval and stays inside
                assert prev.magnitude.lo <= out.magnitude.lo
                assert out.magnitude.hi <= prev.magnitude.hi
            prev = out


class TestThetaEval:
    def test_agrees_with_derivative_at_zero(self):
        for j in (0, 1, 4):
            at0 = theta_derivative_at_zero(gevrey(1), j, 14).interval()
            ev = theta_eval(gevrey(1), Fraction(0), j, 14)
            # overlapping enclosures of the same number
            assert not (ev.re.hi < at0.re.lo or at0.re.hi < ev.re.lo)
            assert not (ev.im.hi < at0.im.lo or at0.im.hi < ev.im.lo)

    def test_tight_width_at_moderate_truncation(self):
        out = theta_eval(gevrey(1), Fraction(1, 2), 0, 16)
        assert out.re.width() < Fraction(1, 1 << 20)
        assert out.im.width() < Fraction(1, 1 << 20)

    def test_upper_bound_small_arguments(self):
        # |theta(x)| <= 3 * Mbar_0 = 3 on (-1, 1)
        for x in (Fraction(0), Fraction(1, 4), Fraction(-1, 2), Fraction(9, 10)):
            out = theta_eval(gevrey(1), x, 0, 14)
            assert out.abs_sq().hi <= 9

    def test_certified_upper_bound_orders_up_to_12(self):
        xs = [Fraction(0), Fraction(1, 4), Fraction(-1, 4),
              Fraction(1, 2), Fraction(-1, 2)]
        for M in (gevrey(1), qgevrey(2)):
            for j in (0, 3, 7, 12):
                for x in xs:
                    out = theta_eval(M, x, j, j + 9)
                    cap = 3 * Fraction(2) ** j * factorial(j) * M.exact_value(j)
                    assert out.abs_sq().hi <= cap * cap, (M, j, x)


class TestBorelExample:
    def geometric(self):
        return BorelExample(coeffs=lambda v: Fraction(1, 2**v),
                            rho=Fraction(1, 2), N=40)

    def test_value_at_zero_is_2i(self):
        # sum 2^-v * (i v) = i * sum v 2^-v = 2i  (geometric derivative sum)
        out = borel_example_eval(self.geometric(), Fraction(0))
        assert out.contains(0, 2)

    def test_zero_coefficients(self):
        zero = BorelExample(coeffs=lambda v: Fraction(0), rho=Fraction(1, 2), N=10)
        out = borel_example_eval(zero, Fraction(1))
        assert out.contains(0, 0)
        for j in (0, 2, 5):
            chk = borel_example_derivatives(zero, j)
            assert chk.direct.contains(0, 0)
            assert chk.via_transform.contains(0, 0)

    def test_eval_away_from_origin_is_enclosed(self):
        out1 = borel_example_eval(self.geometric(), Fraction(1))
        out2 = BorelExample(coeffs=lambda v: Fraction(1, 2**v),
                            rho=Fraction(1, 2), N=60)
        out2 = borel_example_eval(out2, Fraction(1))
        # longer truncation stays inside the shorter one's enclosure
        assert out1.re.lo <= out2.re.lo and out2.re.hi <= out1.re.hi

    def test_derivative_cross_check_j0_matches_eval(self):
        chk = borel_example_derivatives(self.geometric(), 0)
        assert chk.overlap
        assert chk.direct.contains(0, 2)
        assert chk.via_transform.contains(0, 2)

    def test_cross_check_overlap_through_order_10(self):
        ex = BorelExample(coeffs=lambda v: Fraction(1, 3**v),
                          rho=Fraction(1, 3), N=60)
        for j in range(11):
            chk = borel_example_derivatives(ex, j)
            assert chk.overlap, j

    def test_transform_matrix_size_one(self):
        chk = borel_example_derivatives(self.geometric(), 0)
        assert chk.transform_matrix == [[1]]

    def test_coefficient_bound_enforced(self):
        bad = BorelExample(coeffs=lambda v: Fraction(1), rho=Fraction(1, 2), N=10)
        with pytest.raises(DomainError):
            borel_example_eval(bad, Fraction(0))


class TestBuildTheta:
    def test_ratio_sequence_nondecreasing(self):
        approx = build_theta(gevrey(1), 16)
        for k in range(1, 17):
            assert approx.ms[k].lo >= approx.ms[k - 1].hi

    def test_analytic_ratios_are_integers(self):
        approx = build_theta(analytic(), 10)
        for k in range(11):
            assert approx.ms[k].is_point()
            assert approx.ms[k].lo == k + 1
