import random
from fractions import Fraction

import pytest

from qal.division import (DistinguishedPoly, euclid_divide, gevrey_flat_witness,
                          generic_divisor, hyperbolic_check_2d,
                          hyperbolic_falsify_grid, nodiv_witness, regular_order,
                          specialize_division, strictly_regular_check)
from qal.errors import DomainError, NonMonicDivisorError, ZeroPolynomialError
from qal.intervals import iv_exp
from qal.polynomials import MultiPoly, parse_polynomial
from qal.rationals import factorial
from qal.sequences import analytic, gevrey


def P(text):
    return parse_polynomial(text)


def dist(text, var="y"):
    return DistinguishedPoly.from_multipoly(P(text), var)


class TestEuclidDivide:
    def test_self_division(self):
        F = generic_divisor(2)
        G, H = euclid_divide(F, F, "z")
        assert G == MultiPoly.constant(1, G.vars)
        assert H.is_zero()

    def test_z2_by_generic_quadratic(self):
        # hand-derived: z^2 = F*1 + (-mu1 z - mu2)
        G, H = euclid_divide(P("z^2"), generic_divisor(2), "z")
        assert G == MultiPoly.constant(1, G.vars)
        assert H == -P("mu1*z") - P("mu2")

    def test_z3_by_generic_quadratic(self):
        # hand-derived: z^3 = F*(z - mu1) + ((mu1^2 - mu2) z + mu1 mu2)
        G, H = euclid_divide(P("z^3"), generic_divisor(2), "z")
        assert G == P("z - mu1")
        assert H == P("(mu1^2 - mu2)*z + mu1*mu2")

    def test_non_monic_rejected(self):
        with pytest.raises(NonMonicDivisorError):
            euclid_divide(P("z^2"), P("x*z^2 + 1"), "z")

    def test_random_reexpansion_and_uniqueness(self):
        rng = random.Random(33412)
        mus = ("mu1", "mu2", "mu3")
        for _ in range(120):
            d = rng.randint(1, 4)
            F = generic_divisor(d)
            # P with coefficients in up to 3 mu variables
            vars_all = tuple(sorted(set(mus[:rng.randint(0, 3)]) | {"z"}))
            coeffs = {}
            for _ in range(rng.randint(1, 6)):
                exps = tuple(rng.randint(0, 3) if v != "z" else rng.randint(0, 8)
                             for v in vars_all)
                coeffs[exps] = Fraction(rng.randint(-9, 9) or 2, rng.randint(1, 4))
            Ppoly = MultiPoly(vars_all, coeffs)
            G, H = euclid_divide(Ppoly, F, "z")
            assert F * G + H == Ppoly  # re-expansion, exact
            assert H.is_zero() or H.degree("z") < d
            # uniqueness: subtracting a second independent computation
            G2, H2 = euclid_divide(Ppoly + F - F, F, "z")
            assert G2 == G and H2 == H


class TestSpecializeDivision:
    def test_y2_plus_x(self):
        phi = dist("y^2 + x")
        G, hs = specialize_division(P("z^2"), phi, "z")
        assert G == MultiPoly.constant(1, G.vars)
        assert hs[0] == -P("x")
        assert hs[1].is_zero()

    def test_degree_smaller_than_divisor(self):
        phi = dist("y^2 + x")
        G, hs = specialize_division(P("1"), phi, "z")
        assert G.is_zero()
        assert hs[0] == MultiPoly.constant(1, hs[0].vars)

    def test_y2_minus_x2(self):
        phi = dist("y^2 - x^2")
        G, hs = specialize_division(P("z^2"), phi, "z")
        assert G == MultiPoly.constant(1, G.vars)
        assert hs[0] == P("x^2")

    def test_commutes_with_direct_division(self):
        rng = random.Random(777)
        phi = dist("y^2 + x^3")
        phi_z = P("z^2 + x^3")
        for _ in range(40):
            coeffs = {}
            for _ in range(rng.randint(1, 5)):
                coeffs[(rng.randint(0, 2), rng.randint(0, 6))] = \
                    Fraction(rng.randint(-5, 5) or 1)
            Ppoly = MultiPoly(("x", "z"), coeffs)
            G1, hs = specialize_division(Ppoly, phi, "z")
            G2, H2 = euclid_divide(Ppoly, phi_z, "z")
            assert G1 == G2
            recomposed = sum((h.with_vars(("x", "z")) * P("z") ** i
                              for i, h in enumerate(hs)),
                             MultiPoly(("x", "z")))
            assert recomposed == H2.with_vars(("x", "z"))


class TestRegularity:
    def test_order_two_in_y(self):
        assert regular_order(P("y^2 + x"), "y") == 2
        assert regular_order(P("y^2 + x^2"), "y") == 2

    def test_vanishing_restriction(self):
        assert regular_order(P("x*y"), "y") is None

    def test_zero_polynomial_rejected(self):
        with pytest.raises(ZeroPolynomialError):
            regular_order(MultiPoly(("x", "y")), "y")

    def test_unit(self):
        assert regular_order(P("1 + x + y"), "y") == 0

    def test_strictly_regular(self):
        assert not strictly_regular_check(P("y^2 + x"), 2, "y")
        assert strictly_regular_check(P("y^2 + x^2"), 2, "y")
        assert strictly_regular_check(P("y^3"), 3, "y")
        assert not strictly_regular_check(P("y^3 + x"), 3, "y")


class TestHyperbolicity:
    def test_real_cone(self):
        out = hyperbolic_check_2d(dist("y^2 - x^2"))
        assert out.verdict == "hyperbolic"

    def test_imaginary_cone(self):
        out = hyperbolic_check_2d(dist("y^2 + x^2"))
        assert out.verdict == "not-hyperbolic"
        assert out.witness_side == "both"

    def test_one_sided_witness(self):
        out = hyperbolic_check_2d(dist("y^2 + x"))
        assert out.verdict == "not-hyperbolic"
        assert out.witness_side == "plus"
        assert out.real_root_counts == {"plus": 0, "minus": 2}

    def test_even_powers_not_hyperbolic(self):
        for m in (1, 2, 3, 4):
            out = hyperbolic_check_2d(dist(f"y^2 + x^{2 * m}"))
            assert out.verdict == "not-hyperbolic", m

    def test_degree_one_always_hyperbolic(self):
        out = hyperbolic_check_2d(dist("y + x^2"))
        assert out.verdict == "hyperbolic"

    def test_products_of_rational_branches(self):
        # oracle: products of (y - p_i(x)) are hyperbolic by construction
        rng = random.Random(90210)
        for _ in range(25):
            factors = []
            used = set()
            for _ in range(rng.randint(1, 3)):
                key = (rng.randint(-3, 3), rng.randint(-2, 2), rng.randint(0, 2))
                if key in used:
                    continue
                used.add(key)
                c1, c2, p = key
                factors.append(P(f"y - ({c1}*x + {c2}*x^2 + {c2}*x^{p + 3})"))
            if not factors:
                continue
            phi = factors[0]
            for f in factors[1:]:
                phi = phi * f
            out = hyperbolic_check_2d(DistinguishedPoly.from_multipoly(phi, "y"))
            assert out.verdict == "hyperbolic", str(phi)

    def test_multiplicities_are_bookkept(self):
        phi = P("(y^2 - x^2)^2")
        out = hyperbolic_check_2d(DistinguishedPoly.from_multipoly(phi, "y"))
        assert out.verdict == "hyperbolic"
        assert out.multiplicity_excess == 2
        assert out.degree == 2

    def test_requested_side_only(self):
        out = hyperbolic_check_2d(dist("y^2 + x"), side="minus")
        assert out.verdict == "hyperbolic"  # real roots on the minus side


class TestFalsifyGrid:
    def test_sum_of_squares_three_vars(self):
        phi = DistinguishedPoly("y", 2, [MultiPoly(("x1", "x2")),
                                         P("x1^2 + x2^2")])
        hit = hyperbolic_falsify_grid(phi, Fraction(1), 2)
        assert hit is not None
        assert any(v != 0 for v in hit.values())

    def test_real_roots_never_falsified(self):
        phi = DistinguishedPoly("y", 2, [MultiPoly(("x1", "x2")),
                                         P("-(x1^2 + x2^2)")])
        assert hyperbolic_falsify_grid(phi, Fraction(1), 2) is None

    def test_degree_one(self):
        phi = DistinguishedPoly("y", 1, [P("x1 + x2")])
        assert hyperbolic_falsify_grid(phi, Fraction(1), 2) is None


class TestNoDivWitness:
    def test_certified_bounds_gevrey1(self):
        out = nodiv_witness(gevrey(1), 6, 20)
        for j, (c, low) in enumerate(zip(out.c_values, out.lower_bounds)):
            assert c.lo >= low
            assert low == factorial(2 * j)

    def test_diagnostic_strictly_increasing_gevrey1(self):
        # oracle: ((2j)!/j!)^(1/j) increasing <=> cross-powered integer compare
        for j in range(1, 6):
            a = Fraction(factorial(2 * j), factorial(j))
            b = Fraction(factorial(2 * j + 2), factorial(j + 1))
            assert a ** (j + 1) < b**j
        out = nodiv_witness(gevrey(1), 6, 20)
        for d1, d2 in zip(out.diagnostics, out.diagnostics[1:]):
            assert d1.hi < d2.lo

    def test_analytic_degenerates(self):
        out = nodiv_witness(analytic(), 4, 16)
        for d in out.diagnostics:
            assert d.lo <= 1 <= d.hi
        assert "degenerates" in out.symbolic_note


class TestFlatWitness:
    def test_first_row_alpha1_k1(self):
        # value at j=1 is -2/e
        out = gevrey_flat_witness(Fraction(1), 1, 3)
        row = out.rows[0]
        two_over_e = 2 * iv_exp(Fraction(-1), 128)
        assert row.value.hi < 0
        assert row.value.abs().lo <= two_over_e.hi
        assert row.value.abs().hi >= two_over_e.lo

    def test_constant_certifies_bound(self):
        out = gevrey_flat_witness(Fraction(1), 2, 5)
        C = out.constant
        assert C > 0
        for r in out.rows:
            assert C ** (r.j + 1) * r.bound_base.hi <= r.value.abs().lo

    def test_ratios_monotone_for_k2(self):
        out = gevrey_flat_witness(Fraction(1), 2, 5)
        for r1, r2 in zip(out.rows, out.rows[1:]):
            assert r1.ratio.hi < r2.ratio.lo

    def test_domain_validation(self):
        with pytest.raises(DomainError):
            gevrey_flat_witness(Fraction(-1), 1, 3)
