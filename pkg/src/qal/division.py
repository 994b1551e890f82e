"""Division machinery for plane and higher-dimensional germs.

Covers Euclidean division by the generic monic polynomial and its
specialization to concrete distinguished polynomials, regularity orders,
strict regularity of truncated series, hyperbolicity of plane distinguished
polynomials (decided exactly by a Sturm chain over the rational function
field Q(x) with one-sided sign analysis at 0), a grid falsifier for three
and more variables, and the two computable witnesses tied to division
failures: the even-part Taylor coefficients of the extremal function theta
and the flat-function derivative table for Gevrey weights.

The hyperbolicity decision rests on the observation that the sign of a
nonzero rational function near 0+ or 0- is read off from finitely many
coefficients (the lowest-order ones), so "all roots real for every x' in
a punctured neighborhood" is decidable without any sampling.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (ArityMismatchError, ChainDegenerationError, DomainError,
                     NonMonicDivisorError, PrecisionFailure,
                     ZeroPolynomialError)
from .intervals import RI, default_bits, iv_exp, ri_pow_frac
from .polynomials import (MultiPoly, RatFunc, _var_key, ugcd, udeg, uderiv,
                          udivmod, uneg, utrim)
from .rationals import factorial, format_fraction
from .sequences import CarlemanSequence
from .theta import theta_derivative_at_zero


# -- Euclidean division ----------------------------------------------------------

def euclid_divide(P: MultiPoly, F: MultiPoly, var: str) -> tuple[MultiPoly, MultiPoly]:
    """Divide P by F along var: P = F*G + H with deg_var H < deg_var F.

    F must be monic in var with a constant leading coefficient; the
    remaining variables ride along symbolically in the coefficient ring,
    where monic division needs no coefficient inversion.  The identity is
    re-verified by expansion before returning.
    """
    vars_all = tuple(sorted(set(P.vars) | set(F.vars) | {var},
                            key=_var_key))
    P = P.with_vars(vars_all)
    F = F.with_vars(vars_all)
    d = F.degree(var)
    if d < 0:
        raise NonMonicDivisorError("cannot divide by the zero polynomial")
    lead = F.coefficient(var, d)
    if not (lead.total_degree() == 0 and lead.constant_term() == 1):
        raise NonMonicDivisorError(f"divisor is not monic in {var}")

    rest = tuple(v for v in vars_all if v != var)
    p_coeffs = [c for c in P.as_univariate(var)]
    f_coeffs = [c for c in F.as_univariate(var)]
    quot: list[MultiPoly] = [MultiPoly(rest) for _ in range(max(0, len(p_coeffs) - d))]
    work = list(p_coeffs)
    while len(work) > d:
        top = work[-1]
        shift = len(work) - 1 - d
        if top:
            quot[shift] = quot[shift] + top
            for i in range(d + 1):
                work[shift + i] = work[shift + i] - top * f_coeffs[i]
        work.pop()

    def assemble(coeff_list):
        out = MultiPoly(vars_all)
        xv = MultiPoly.variable(var, vars_all)
        for p, c in enumerate(coeff_list):
            out = out + c.with_vars(vars_all) * xv**p
        return out

    G = assemble(quot)
    H = assemble(work)
    if F * G + H != P:
        raise ArithmeticError("division identity failed to re-expand")
    if H and H.degree(var) >= d:
        raise ArithmeticError("remainder degree not reduced")
    return G, H


def generic_divisor(d: int, var: str = "z") -> MultiPoly:
    """The generic monic polynomial z^d + mu1 z^(d-1) + ... + mud."""
    mus = tuple(f"mu{i}" for i in range(1, d + 1))
    vars_all = tuple(sorted(mus)) + (var,)
    out = MultiPoly.variable(var, vars_all) ** d
    for i in range(1, d + 1):
        out = out + MultiPoly.variable(f"mu{i}", vars_all) \
            * MultiPoly.variable(var, vars_all) ** (d - i)
    return out


@dataclass
class DistinguishedPoly:
    """Monic polynomial var^d + a_1(x') var^(d-1) + ... + a_d(x') whose
    coefficients vanish at the origin."""

    var: str
    d: int
    a: list[MultiPoly]      # a[j] multiplies var^(d-1-j); all a[j](0) = 0

    def __post_init__(self):
        if self.d < 1:
            raise DomainError("distinguished polynomial needs degree >= 1")
        if len(self.a) != self.d:
            raise ArityMismatchError(
                f"need {self.d} coefficients, got {len(self.a)}")
        for j, aj in enumerate(self.a):
            if aj and aj.constant_term() != 0:
                raise DomainError(f"coefficient a_{j + 1} does not vanish at 0")
            if aj.vars and self.var in aj.vars and aj.degree(self.var) > 0:
                raise DomainError(f"coefficient a_{j + 1} involves {self.var}")

    @staticmethod
    def from_multipoly(phi: MultiPoly, var: str) -> "DistinguishedPoly":
        d = phi.degree(var)
        if d < 1:
            raise DomainError("polynomial has no main-variable degree")
        lead = phi.coefficient(var, d)
        if not (lead.total_degree() == 0 and lead.constant_term() == 1):
            raise NonMonicDivisorError(f"not monic in {var}")
        coeffs = [phi.coefficient(var, d - j) for j in range(1, d + 1)]
        return DistinguishedPoly(var, d, coeffs)

    def to_multipoly(self) -> MultiPoly:
        vars_all = tuple(sorted(set(v for aj in self.a for v in aj.vars) | {self.var},
                                key=_var_key))
        out = MultiPoly.variable(self.var, vars_all) ** self.d
        for j, aj in enumerate(self.a):
            out = out + aj.with_vars(vars_all) \
                * MultiPoly.variable(self.var, vars_all) ** (self.d - 1 - j)
        return out


def specialize_division(P: MultiPoly, phi: DistinguishedPoly,
                        var: str = "z") -> tuple[MultiPoly, list[MultiPoly]]:
    """Divide P(z) by phi via the generic divisor: first the symbolic
    division by z^d + mu1 z^(d-1) + ..., then the exact substitution
    mu_j := a_j(x').  The specialized identity is re-verified by expansion.
    """
    d = phi.d
    F = generic_divisor(d, var)
    G, H = euclid_divide(P, F, var)
    for j in range(1, d + 1):
        G = G.substitute(f"mu{j}", phi.a[j - 1])
        H = H.substitute(f"mu{j}", phi.a[j - 1])
    phi_poly = phi.to_multipoly().substitute(phi.var, MultiPoly.variable(var)) \
        if phi.var != var else phi.to_multipoly()
    if phi_poly * G + H != P.with_vars(tuple(sorted(set(P.vars) | set(phi_poly.vars),
                                                    key=_var_key))):
        raise ArithmeticError("specialized division identity failed")
    h_parts = [H.coefficient(var, j) if (H and H.degree(var) >= j) else MultiPoly(())
               for j in range(d)]
    return G, h_parts


def regular_order(phi: MultiPoly, var: str) -> int | None:
    """Order of vanishing of phi(0, ..., 0, var) at 0, or None when that
    restriction vanishes identically (not regular)."""
    if phi.is_zero():
        raise ZeroPolynomialError("regular order of the zero polynomial")
    restricted = {}
    i = phi.vars.index(var) if var in phi.vars else None
    if i is None:
        return None if phi.constant_term() == 0 else 0
    for exps, c in phi.coeffs.items():
        if all(e == 0 for n, e in enumerate(exps) if n != i):
            restricted[exps[i]] = restricted.get(exps[i], 0) + c
    powers = sorted(p for p, c in restricted.items() if c != 0)
    return powers[0] if powers else None


def strictly_regular_check(F: MultiPoly, d: int, var: str) -> bool:
    """True iff F has no monomials of total degree < d and the pure var^d
    coefficient is nonzero."""
    if F.total_degree() >= 0 and F.order() < d:
        return False
    i = F.vars.index(var) if var in F.vars else None
    if i is None:
        return False
    target = tuple(d if n == i else 0 for n in range(len(F.vars)))
    return F.coeffs.get(target, 0) != 0


# -- hyperbolicity ----------------------------------------------------------------

def _sturm_chain(p: list) -> list[list]:
    """Signed-remainder Sturm chain for a squarefree polynomial over a
    field (coefficients: Fraction or RatFunc)."""
    chain = [list(p), uderiv(p)]
    while chain[-1]:
        rem = udivmod(chain[-2], chain[-1])[1]
        if not rem:
            break
        chain.append(uneg(rem))
    if not chain[-1]:
        chain.pop()
    return chain


def _variations(signs: list[int]) -> int:
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a * b < 0)


def _real_root_count_rational(p: list) -> int:
    """Number of distinct real roots of a squarefree rational polynomial."""
    chain = _sturm_chain(p)
    at_minus = [(1 if c[-1] > 0 else -1) * (-1) ** udeg(c) for c in chain if c]
    at_plus = [1 if c[-1] > 0 else -1 for c in chain if c]
    return _variations(at_minus) - _variations(at_plus)


@dataclass
class HyperbolicityReport:
    verdict: str                      # 'hyperbolic' | 'not-hyperbolic' | 'undecided'
    witness_side: str | None          # 'plus' | 'minus' | 'both' | None
    degree: int                       # deg of the squarefree part in the main var
    multiplicity_excess: int          # deg(gcd(phi, phi')) removed beforehand
    real_root_counts: dict            # side -> distinct real roots near 0

    def to_json(self):
        return {"verdict": self.verdict, "witness_side": self.witness_side,
                "degree": self.degree,
                "multiplicity_excess": self.multiplicity_excess,
                "real_root_counts": self.real_root_counts}


def _phi_as_ratfunc_poly(phi: DistinguishedPoly) -> list[RatFunc]:
    """Dense main-variable coefficients of phi as elements of Q(x)."""
    coeffs: list[RatFunc] = []
    for p in range(phi.d + 1):
        if p == phi.d:
            coeffs.append(RatFunc(1))
            continue
        a = phi.a[phi.d - 1 - p]
        dense: list[Fraction] = []
        if a:
            xname = a.vars[0] if a.vars else None
            deg = a.degree(xname) if xname else 0
            dense = [a.coefficient(xname, e).constant_term() if xname else a.constant_term()
                     for e in range(deg + 1)]
        coeffs.append(RatFunc(dense))
    return coeffs


def hyperbolic_check_2d(phi: DistinguishedPoly,
                        side: str = "both") -> HyperbolicityReport:
    """Decide whether all roots of phi(x, .) are real for every x in a
    punctured one-sided neighborhood of 0.

    The Sturm chain of the squarefree part is computed once over Q(x);
    near 0 the sign of each leading coefficient is the sign of its
    lowest-order term, so the root count on each side is exact.  The
    polynomial is hyperbolic iff on every requested side the count equals
    the squarefree degree.
    """
    if side not in ("both", "plus", "minus"):
        raise DomainError("side must be 'both', 'plus' or 'minus'")
    for aj in phi.a:
        if len(set(aj.vars)) > 1:
            raise DomainError("the exact decision applies to one parameter "
                              "variable; use hyperbolic_falsify_grid for more")
    p = _phi_as_ratfunc_poly(phi)
    dp = uderiv(p)
    g = ugcd(p, dp)
    excess = udeg(g)
    if excess > 0:
        p = udivmod(p, g)[0]  # real-rootedness ignores multiplicities
    sf_deg = udeg(p)
    chain = _sturm_chain(p)
    for entry in chain:
        if entry and all(not c for c in entry):
            raise ChainDegenerationError("chain entry vanished identically")

    sides = ("plus", "minus") if side == "both" else (side,)
    counts = {}
    bad = []
    for s in sides:
        lead_signs = []
        degs = []
        for entry in chain:
            lead = entry[-1]
            sign = lead.sign_near_zero(s)
            if sign == 0:
                raise ChainDegenerationError(
                    "leading coefficient with no sign near 0")
            lead_signs.append(sign)
            degs.append(udeg(entry))
        at_plus = list(lead_signs)
        at_minus = [sg * (-1) ** d for sg, d in zip(lead_signs, degs)]
        count = _variations(at_minus) - _variations(at_plus)
        counts[s] = count
        if count != sf_deg:
            bad.append(s)
    if not bad:
        return HyperbolicityReport("hyperbolic", None, sf_deg, excess, counts)
    witness = "both" if len(bad) == 2 else bad[0]
    return HyperbolicityReport("not-hyperbolic", witness, sf_deg, excess, counts)


def hyperbolic_falsify_grid(phi: DistinguishedPoly, radius: Fraction,
                            resolution: int) -> dict | None:
    """Search a rational grid in the parameter variables for a point whose
    fiber has a non-real root (decided exactly by a rational Sturm count).

    Returns the first counterexample point in deterministic scan order, or
    None.  A None result is NOT a hyperbolicity proof; it only reports
    that the grid found nothing.
    """
    radius = Fraction(radius)
    if radius <= 0 or resolution < 1:
        raise DomainError("grid needs a positive radius and resolution")
    params = sorted(set(v for aj in phi.a for v in aj.vars))
    steps = [Fraction(i, resolution) * radius
             for i in range(-resolution, resolution + 1)]

    def points(index):
        if index == len(params):
            yield {}
            return
        for rest in points(index + 1):
            for s in steps:
                out = dict(rest)
                out[params[index]] = s
                yield out

    for assignment in points(0):
        coeffs: list[Fraction] = []
        for p in range(phi.d + 1):
            if p == phi.d:
                coeffs.append(Fraction(1))
            else:
                a = phi.a[phi.d - 1 - p]
                coeffs.append(Fraction(a.eval(assignment)) if a else Fraction(0))
        poly = utrim(list(coeffs))
        g = ugcd(poly, uderiv(poly))
        sf = udivmod(poly, g)[0] if udeg(g) > 0 else poly
        if udeg(sf) < 1:
            continue
        if _real_root_count_rational(sf) != udeg(sf):
            return {v: assignment[v] for v in params}
    return None


# -- witnesses --------------------------------------------------------------------

@dataclass
class NoDivWitness:
    """Taylor data of the even part of theta: c_j = (-1)^j theta^(2j)(0)/(2j)!
    with the certified bound |c_j| >= M_{2j}, plus the growth diagnostic
    sup (M_{2j}/M_j)^(1/j) whose divergence blocks membership of the even
    part in the original class."""

    orders: list[int]
    c_values: list[RI]
    lower_bounds: list[Fraction]
    diagnostics: list[RI]
    diagnostic_sup: RI
    symbolic_note: str

    def to_json(self):
        return {"orders": self.orders,
                "c": [v.to_json() for v in self.c_values],
                "lower_bounds": [format_fraction(b) for b in self.lower_bounds],
                "diagnostics": [d.to_json() for d in self.diagnostics],
                "diagnostic_sup": self.diagnostic_sup.to_json(),
                "note": self.symbolic_note}


def nodiv_witness(M: CarlemanSequence, J: int, K: int) -> NoDivWitness:
    """Certified table of the even-part Taylor coefficients of theta.

    theta^(2j)(0) = (-1)^j * S with S a positive sum whose k=2j term alone
    is (2j)! M_{2j}, so c_j = S/(2j)! >= M_{2j} with certainty.  The
    diagnostic column reports (M_{2j}/M_j)^(1/j); for any non-analytic
    log-convex sequence M_{2j} >= M_j^2 makes it diverge, which is recorded
    symbolically.
    """
    if K < 2 * J + 8:
        raise DomainError("need K >= 2J + 8")
    orders, cvals, lows, diags = [], [], [], []
    bits = default_bits()
    for j in range(J + 1):
        th = theta_derivative_at_zero(M, 2 * j, K)
        c = th.magnitude * RI.point(Fraction(1, factorial(2 * j)))
        m2j = M.interval_value(2 * j, bits)
        if not c.lo >= m2j.hi:
            raise PrecisionFailure(f"cannot certify |c_{j}| >= M_{2 * j}")
        orders.append(2 * j)
        cvals.append(c)
        lows.append(m2j.hi)
        if j >= 1:
            ratio = M.interval_value(2 * j, bits) / M.interval_value(j, bits)
            diags.append(ri_pow_frac(ratio, Fraction(1, j), bits)
                         if not ratio.is_point()
                         else ri_pow_frac(ratio.lo, Fraction(1, j), bits))
    sup = diags[0]
    for d in diags[1:]:
        sup = RI(max(sup.lo, d.lo), max(sup.hi, d.hi))
    if M.family == "analytic":
        note = ("analytic class: the diagnostic is constantly 1 and the "
                "witness degenerates")
    else:
        note = ("log-convexity gives M_{2j} >= M_j^2, so the diagnostic "
                "dominates (M_j)^(1/j), which is unbounded outside the "
                "analytic class; the even part escapes every constant "
                "multiple of the original weight")
    return NoDivWitness(orders, cvals, lows, diags, sup, note)


@dataclass
class FlatWitnessRow:
    j: int
    value: RI                  # the 2j-th pure-y derivative at (j^-alpha, 0)
    bound_base: RI             # (2j)!^(1 + k*alpha)
    ratio: RI                  # |value| / bound_base


@dataclass
class FlatWitnessTable:
    alpha: Fraction
    k: int
    rows: list[FlatWitnessRow]
    constant: Fraction         # largest dyadic C with |value_j| >= C^(j+1) * base_j

    def to_json(self):
        return {"alpha": format_fraction(self.alpha), "k": self.k,
                "constant": format_fraction(self.constant),
                "rows": [{"j": r.j, "value": r.value.to_json(),
                          "ratio": r.ratio.to_json()} for r in self.rows]}


def gevrey_flat_witness(alpha: Fraction, k: int, J: int,
                        bits: int | None = None) -> FlatWitnessTable:
    """Derivative table of the flat quotient g = exp(-|x|^(-1/alpha)) / (y^2 + x^(2k))
    along y = 0, sampled at x_j = j^-alpha.

    The 2j-th pure-y derivative there equals
        (-1)^j (2j)! exp(-j) j^(2 k alpha (j+1)),
    computed as a certified interval.  The table reports the largest
    dyadic constant C (bisected to relative granularity 2^-16) such that
    |value_j| >= C^(j+1) (2j)!^(1+k*alpha) holds for all 1 <= j <= J; the
    bound certifies that the quotient's derivatives outgrow the k-th power
    of the weight sequence, which blocks flat-ideal membership below the
    critical exponent.  The constant is empirical for this table, not a
    universally valid one.
    """
    alpha = Fraction(alpha)
    if alpha <= 0 or k < 1 or J < 1:
        raise DomainError("need alpha > 0, k >= 1, J >= 1")
    bits = bits or default_bits()
    rows = []
    for j in range(1, J + 1):
        mag = RI.point(Fraction(factorial(2 * j))) * iv_exp(Fraction(-j), bits)
        expo = 2 * k * alpha * (j + 1)
        mag = mag * ri_pow_frac(Fraction(j), expo, bits)
        value = mag if j % 2 == 0 else -mag
        base = ri_pow_frac(Fraction(factorial(2 * j)), 1 + k * alpha, bits)
        rows.append(FlatWitnessRow(j, value, base, mag / base))

    def holds(C: Fraction) -> bool:
        for r in rows:
            if not (C ** (r.j + 1) * r.bound_base.hi <= r.value.abs().lo):
                return False
        return True

    lo, hi = Fraction(0), Fraction(4)
    if not holds(Fraction(1, 1 << 60)):
        raise PrecisionFailure("no positive constant certifiable; raise bits")
    lo = Fraction(1, 1 << 60)
    for _ in range(80):
        mid = (lo + hi) / 2
        if holds(mid):
            lo = mid
        else:
            hi = mid
        if lo > 0 and (hi - lo) / lo < Fraction(1, 1 << 16):
            break
    return FlatWitnessTable(alpha, k, rows, lo)
