import random
from fractions import Fraction

import pytest

from qal.errors import QalSyntaxError
from qal.polynomials import (MultiPoly, RatFunc, parse_polynomial, udivmod,
                             ugcd, umul, uadd)
from qal.rationals import GaussianRational


def P(text):
    return parse_polynomial(text)


class TestParser:
    def test_two_term(self):
        poly = P("y^2 + x^4")
        assert poly.vars == ("x", "y")
        assert poly.coeffs == {(0, 2): Fraction(1), (4, 0): Fraction(1)}

    def test_three_term(self):
        poly = P("y^2 - 3*x*y + x^3")
        assert poly.coeffs == {(0, 2): Fraction(1), (1, 1): Fraction(-3),
                               (3, 0): Fraction(1)}

    def test_syntax_error_position(self):
        with pytest.raises(QalSyntaxError) as err:
            P("y^^2")
        assert err.value.position == 2

    def test_rational_coefficient(self):
        poly = P("1/2*x + 3")
        assert poly.coeffs == {(1,): Fraction(1, 2), (0,): Fraction(3)}

    def test_parentheses_and_unary_minus(self):
        assert P("-(x - y)^2") == -(P("x") - P("y")) ** 2

    def test_numbered_variables(self):
        poly = P("x1^2 + x2^2 + y^2")
        assert poly.vars == ("x1", "x2", "y")

    def test_unexpected_character(self):
        with pytest.raises(QalSyntaxError):
            P("x + $")

    def test_round_trip_random_corpus(self):
        rng = random.Random(13571)
        for _ in range(100):
            nvars = rng.randint(1, 3)
            vars = tuple(sorted(rng.sample(["x", "y", "x1", "x2"], nvars),
                                key=lambda v: (len(v), v)))
            coeffs = {}
            for _ in range(rng.randint(1, 6)):
                exps = tuple(rng.randint(0, 4) for _ in vars)
                coeffs[exps] = Fraction(rng.randint(-9, 9) or 1,
                                        rng.randint(1, 5))
            poly = MultiPoly(vars, coeffs)
            if poly.is_zero():
                continue
            assert parse_polynomial(str(poly)) == poly


class TestMultiPoly:
    def test_substitution(self):
        phi = P("y^2 + x")
        shifted = phi.substitute("x", -P("y") ** 2)
        assert shifted.is_zero()

    def test_order_and_degrees(self):
        poly = P("y^2 + x^3")
        assert poly.order() == 2
        assert poly.degree("y") == 2
        assert poly.degree("x") == 3
        assert poly.total_degree() == 3

    def test_eval(self):
        poly = P("x^2 + y")
        assert poly.eval({"x": Fraction(2), "y": Fraction(1, 2)}) == Fraction(9, 2)

    def test_derivative(self):
        assert P("x^3 + x*y").derivative("x") == P("3*x^2 + y")

    def test_gaussian_coefficients(self):
        i = GaussianRational(0, 1)
        poly = MultiPoly(("z",), {(1,): i, (0,): GaussianRational(1)})
        sq = poly * poly
        assert sq.coeffs[(2,)] == GaussianRational(-1)
        assert sq.coeffs[(1,)] == GaussianRational(0, 2)


class TestUnivariateHelpers:
    def test_divmod_exact(self):
        # (x^2+1)(x+2) + 3 divided by x^2+1
        p = uadd(umul([Fraction(1), Fraction(0), Fraction(1)],
                      [Fraction(2), Fraction(1)]), [Fraction(3)])
        q, r = udivmod(p, [Fraction(1), Fraction(0), Fraction(1)])
        assert q == [Fraction(2), Fraction(1)]
        assert r == [Fraction(3)]

    def test_gcd(self):
        # gcd((x-1)(x+2), (x-1)(x-3)) = x - 1 (monic)
        a = umul([Fraction(-1), Fraction(1)], [Fraction(2), Fraction(1)])
        b = umul([Fraction(-1), Fraction(1)], [Fraction(-3), Fraction(1)])
        assert ugcd(a, b) == [Fraction(-1), Fraction(1)]


class TestRatFunc:
    def test_normalization(self):
        # (x^2 - 1)/(x - 1) reduces to x + 1
        f = RatFunc([Fraction(-1), Fraction(0), Fraction(1)],
                    [Fraction(-1), Fraction(1)])
        assert f.num == [Fraction(1), Fraction(1)]
        assert f.den == [Fraction(1)]

    def test_field_operations(self):
        x = RatFunc.x()
        f = 1 / (x + 1) + 1 / (x - 1)
        # = 2x / (x^2 - 1)
        assert f == RatFunc([Fraction(0), Fraction(2)],
                            [Fraction(-1), Fraction(0), Fraction(1)])

    def test_sign_near_zero(self):
        x = RatFunc.x()
        assert x.sign_near_zero("plus") == 1
        assert x.sign_near_zero("minus") == -1
        assert (x * x).sign_near_zero("minus") == 1
        assert (-(x * x * x) / (1 + x)).sign_near_zero("minus") == 1
        assert RatFunc(5).sign_near_zero("minus") == 1

    def test_order_at_zero(self):
        x = RatFunc.x()
        assert (x * x / (1 + x)).order_at_zero() == 2
        assert (1 / x).order_at_zero() == -1
