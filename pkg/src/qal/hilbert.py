"""Finite-dimensional exact model of the weighted Sobolev space attached
to a Carleman sequence.

The ambient space is the span of the monomials 1, x, ..., x^D on the
interval (-1, 1) under the inner product

    <u|v> = sum_{j=0}^{D} (j! M_j)^-2 * integral_{-1}^{1} u^(j) v^(j) dx.

Everything is exact rational arithmetic: the Gram matrix has the closed
form

    G[a][b] = sum_{j<=min(a,b)} w_j * a!/(a-j)! * b!/(b-j)! *
              (1 + (-1)^(a+b)) / (a + b - 2j + 1),

its positive definiteness is certified by an LDL^T factorization with
positive pivots, and all linear solves have exactly zero residual.

The model is deliberately a truncation: statements about the full space
(such as the column limits of the omega table) appear here as exact
finite-dimensional identities at k = D + 1 and as observed trends across
increasing D, not as proofs about the untruncated space.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (DomainError, SelectionFailure, UndecidableAtCap,
                     UnsupportedSequenceError)
from .intervals import RI, PRECISION_CAP
from .rationals import factorial, format_fraction
from .sequences import CarlemanSequence

Vec = list[Fraction]
Mat = list[list[Fraction]]


def ldl_decompose(G: Mat) -> tuple[Mat, Vec]:
    """Exact LDL^T of a symmetric positive definite rational matrix.

    Raises DomainError on a nonpositive pivot, which certifies that the
    matrix is not positive definite.
    """
    n = len(G)
    L: Mat = [[Fraction(0)] * n for _ in range(n)]
    D: Vec = [Fraction(0)] * n
    for i in range(n):
        acc = G[i][i]
        for k in range(i):
            acc -= L[i][k] * L[i][k] * D[k]
        if acc <= 0:
            raise DomainError(f"matrix is not positive definite (pivot {i} = {acc})")
        D[i] = acc
        L[i][i] = Fraction(1)
        for r in range(i + 1, n):
            s = G[r][i]
            for k in range(i):
                s -= L[r][k] * L[i][k] * D[k]
            L[r][i] = s / acc
    return L, D


def ldl_solve(L: Mat, D: Vec, rhs: Vec) -> Vec:
    n = len(rhs)
    y = list(rhs)
    for i in range(n):
        for k in range(i):
            y[i] -= L[i][k] * y[k]
    for i in range(n):
        y[i] /= D[i]
    for i in reversed(range(n)):
        for k in range(i + 1, n):
            y[i] -= L[k][i] * y[k]
    return y


def poly_derivative(u: Vec, times: int = 1) -> Vec:
    out = list(u)
    for _ in range(times):
        out = [Fraction(i + 1) * c for i, c in enumerate(out[1:])]
    return out


def poly_eval(u: Vec, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(u):
        acc = acc * x + c
    return acc


@dataclass
class HilbertModel:
    seq: CarlemanSequence
    degree: int
    weights: Vec
    gram: Mat
    _ldl: tuple[Mat, Vec] = field(repr=False, default=None)

    def inner(self, u: Vec, v: Vec) -> Fraction:
        """<u|v> via the Gram matrix; u, v in monomial coordinates."""
        u = u + [Fraction(0)] * (self.degree + 1 - len(u))
        v = v + [Fraction(0)] * (self.degree + 1 - len(v))
        gv = [sum(row[b] * v[b] for b in range(self.degree + 1))
              for row in self.gram]
        return sum(u[a] * gv[a] for a in range(self.degree + 1))

    def norm_sq(self, u: Vec) -> Fraction:
        return self.inner(u, u)

    def deriv_at_zero(self, u: Vec, i: int) -> Fraction:
        if i >= len(u):
            return Fraction(0)
        return factorial(i) * u[i]

    def solve(self, rhs: Vec) -> Vec:
        L, D = self._ldl
        return ldl_solve(L, D, rhs)


def build_model(M: CarlemanSequence, D: int) -> HilbertModel:
    """Exact Gram matrix of the monomial basis up to degree D.

    The sequence must be rational valued on 0..D; the dynamic range of the
    weights (about (D! M_D)^2) rules floating point out entirely.
    """
    if D < 1:
        raise DomainError("degree must be >= 1")
    if not M.is_rational_valued():
        raise UnsupportedSequenceError(
            "the Gram model needs exact rational sequence values")
    weights = []
    for j in range(D + 1):
        mj = M.exact_value(j)
        weights.append(Fraction(1) / (factorial(j) * mj) ** 2)
    n = D + 1
    G: Mat = [[Fraction(0)] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            if (a + b) % 2 == 1:
                continue  # odd-parity entries vanish by symmetry of (-1,1)
            s = Fraction(0)
            for j in range(min(a, b) + 1):
                s += (weights[j]
                      * Fraction(factorial(a), factorial(a - j))
                      * Fraction(factorial(b), factorial(b - j))
                      * Fraction(2, a + b - 2 * j + 1))
            G[a][b] = G[b][a] = s
    model = HilbertModel(M, D, weights, G)
    model._ldl = ldl_decompose(G)  # also certifies SPD
    return model


def representer(model: HilbertModel, i: int) -> Vec:
    """The element e_i with <e_i|u> = u^(i)(0) for all u in the model.

    Solves G r = i! * unit_i exactly and verifies the reproducing identity
    on every basis monomial before returning.
    """
    if not 0 <= i <= model.degree:
        raise DomainError(f"representer order {i} outside 0..{model.degree}")
    rhs = [Fraction(0)] * (model.degree + 1)
    rhs[i] = Fraction(factorial(i))
    r = model.solve(rhs)
    for a in range(model.degree + 1):
        unit = [Fraction(0)] * (a + 1)
        unit[a] = Fraction(1)
        expected = Fraction(factorial(i)) if a == i else Fraction(0)
        if model.inner(r, unit) != expected:
            raise ArithmeticError("reproducing identity failed; Gram solve is wrong")
    return r


@dataclass
class MinimalInterpolant:
    model: HilbertModel
    k: int
    data: Vec                 # prescribed derivatives b_0 .. b_{k-1} at 0
    coeffs: Vec               # solution in the monomial basis
    xi: Vec                   # coordinates in the representer basis
    norm_sq: Fraction

    def value_at(self, t: Fraction) -> Fraction:
        return poly_eval(self.coeffs, Fraction(t))

    def constraints_hold(self) -> bool:
        return all(self.model.deriv_at_zero(self.coeffs, i) == self.data[i]
                   for i in range(self.k))


def minimal_interpolant(model: HilbertModel, b: Vec) -> MinimalInterpolant:
    """Minimal-norm element with prescribed derivatives b at the origin.

    The solution is g = sum xi_j e_j where the representer Gram system
    (<e_i|e_j>) xi = b is solved exactly.  For any feasible u in the model
    the exact Pythagoras identity ||u||^2 = ||g||^2 + ||u - g||^2 holds,
    which is what makes g minimal.
    """
    k = len(b)
    if k == 0:
        zero = [Fraction(0)] * (model.degree + 1)
        return MinimalInterpolant(model, 0, [], zero, [], Fraction(0))
    if k > model.degree + 1:
        raise DomainError(f"cannot prescribe {k} derivatives at degree {model.degree}")
    b = [Fraction(x) for x in b]
    reps = [representer(model, j) for j in range(k)]
    # R[i][j] = <e_i|e_j> = e_j^(i)(0), exact
    R: Mat = [[model.deriv_at_zero(reps[j], i) for j in range(k)] for i in range(k)]
    lr, dr = ldl_decompose(R)  # also certifies the representers independent
    xi = ldl_solve(lr, dr, b)
    coeffs = [Fraction(0)] * (model.degree + 1)
    for j in range(k):
        for a in range(model.degree + 1):
            coeffs[a] += xi[j] * reps[j][a]
    norm_sq = sum(xi[j] * b[j] for j in range(k))  # <g|g> = xi . (R xi) = xi . b
    out = MinimalInterpolant(model, k, b, coeffs, xi, norm_sq)
    if not out.constraints_hold():
        raise ArithmeticError("interpolation constraints not satisfied exactly")
    return out


def omega_table(model: HilbertModel, k: int) -> list[Fraction]:
    """The reconstruction weights omega_{j,k} = j! * u_{j,k}(1) for j < k,
    where u_{j,k} is the minimal interpolant of the j-th unit data vector.

    At k = D + 1 the constraints pin every coefficient, u_{j,k} = x^j / j!,
    and the whole column is exactly 1.
    """
    if k > model.degree + 1:
        raise DomainError("omega table needs k <= D + 1")
    out = []
    for j in range(k):
        unit = [Fraction(0)] * k
        unit[j] = Fraction(1)
        u = minimal_interpolant(model, unit)
        out.append(factorial(j) * u.value_at(Fraction(1)))
    return out


@dataclass
class LacunaryReport:
    ks: list[int]
    sums: list[Fraction]      # the verified bound sums, one per p >= 1

    def to_json(self):
        return {"ks": self.ks,
                "sums": [format_fraction(s) for s in self.sums]}


def lacunary_select(M: CarlemanSequence, schedule: list[tuple[int, int]]) -> LacunaryReport:
    """Validate a lacunary schedule of (D_p, k_p) pairs.

    For each p >= 1 the exact sum  sum_{j<=k_{p-1}} |omega_{j,k_p} - 1| M_j
    computed in the degree-D_p model must be at most 1.  The construction
    is validation, not search: existence of a valid schedule in the
    untruncated space does not make any particular finite schedule valid,
    so failures are reported to the caller for rescheduling.
    """
    if not M.is_rational_valued():
        raise UnsupportedSequenceError("lacunary selection needs rational values")
    ks = [k for _, k in schedule]
    if any(k2 <= k1 for k1, k2 in zip(ks, ks[1:])):
        raise DomainError("k_p must be strictly increasing")
    for D, k in schedule:
        if k > D + 1:
            raise DomainError(f"k={k} exceeds D+1={D + 1}")
    sums = []
    for p in range(1, len(schedule)):
        D_p, k_p = schedule[p]
        k_prev = ks[p - 1]
        model = build_model(M, D_p)
        omegas = omega_table(model, k_p)
        total = Fraction(0)
        for j in range(k_prev + 1):
            total += abs(omegas[j] - 1) * M.exact_value(j)
        if total > 1:
            raise SelectionFailure(
                f"bound violated at p={p}: sum = {total} > 1; grow D_p or k_p")
        sums.append(total)
    return LacunaryReport(ks, sums)


@dataclass
class DivergenceDemo:
    crossed: bool
    index: int | None         # first p with partial sum > threshold
    partial_sums: list[Fraction]

    def to_json(self):
        return {"crossed": self.crossed, "index": self.index,
                "partial_sums": [format_fraction(s) for s in self.partial_sums]}


def divergence_demo(M: CarlemanSequence, a: Fraction, ks: list[int],
                    threshold: Fraction) -> DivergenceDemo:
    """Exact partial sums of sum_q M_{k_q} a^{k_q} against a threshold.

    For a sequence of analytic class and a < 1 the sums stay below a
    geometric bound and the scan reports exhaustion; for faster-growing
    sequences the lacunary terms eventually dominate any power a^k.
    """
    if not M.is_rational_valued():
        raise UnsupportedSequenceError("divergence demo needs rational values")
    a = Fraction(a)
    if not 0 < a < 1:
        raise DomainError("a must lie in (0, 1)")
    threshold = Fraction(threshold)
    total = Fraction(0)
    partials = []
    for p, k in enumerate(ks):
        total += M.exact_value(k) * a**k
        partials.append(total)
        if total > threshold:
            return DivergenceDemo(True, p, partials)
    return DivergenceDemo(False, None, partials)


# -- sup-norm comparison on the interval ---------------------------------------


@dataclass
class SobolevRecord:
    order: int
    l2_sq: Fraction            # ||u^(j)||_L2^2, exact
    l2_next_sq: Fraction       # ||u^(j+1)||_L2^2, exact
    sup_lower: Fraction        # exact value at a witness point
    sup_upper: Fraction        # certified upper bound for the sup norm
    left_ok: bool              # (1/sqrt 2) ||u^(j)||_2 <= ||u^(j)||_inf
    right_ok: bool             # ||u^(j)||_inf <= sqrt 2 (||u^(j)||_2 + ||u^(j+1)||_2)


def _l2_sq(u: Vec) -> Fraction:
    # integral over (-1,1) of u^2, exact
    sq = [Fraction(0)] * (2 * len(u) - 1) if u else []
    for i, ci in enumerate(u):
        for j, cj in enumerate(u):
            sq[i + j] += ci * cj
    total = Fraction(0)
    for p, c in enumerate(sq):
        if p % 2 == 0:
            total += c * Fraction(2, p + 1)
    return total


def _box_eval(u: Vec, lo: Fraction, hi: Fraction) -> RI:
    box = RI(lo, hi)
    acc = RI.point(0)
    for c in reversed(u):
        acc = acc * box + RI.point(c)
    return acc


def _sqrt_lower(x: Fraction, bits: int) -> Fraction:
    from .rationals import root_bounds
    return root_bounds(x, 2, bits)[0]


def _sqrt_upper(x: Fraction, bits: int) -> Fraction:
    from .rationals import root_bounds
    return root_bounds(x, 2, bits)[1]


def sobolev_check(u: Vec, j: int) -> SobolevRecord:
    """Certify, for a rational polynomial u, the two-sided comparison of
    the L2 and sup norms of u^(j) on (-1, 1):

        (1/sqrt 2) ||u^(j)||_2  <=  ||u^(j)||_inf
                                <=  sqrt 2 (||u^(j)||_2 + ||u^(j+1)||_2).

    L2 norms are exact rational squares.  The sup norm is enclosed from
    above by interval evaluation on a refined subdivision and from below
    by exact point evaluation; both inequalities are checked in squared
    form so that sqrt 2 never needs to be approximated on its own.
    """
    u = [Fraction(c) for c in u]
    du = poly_derivative(u, j)
    du_next = poly_derivative(u, j + 1)
    A = _l2_sq(du)       # ||u^(j)||_2^2
    B = _l2_sq(du_next)  # ||u^(j+1)||_2^2

    if not any(du):
        zero = Fraction(0)
        return SobolevRecord(j, A, B, zero, zero, True, True)

    # lower bound: exact evaluation on dyadic grids until the witness
    # certifies  sup^2 >= A/2
    target = A / 2
    sup_lower = Fraction(0)
    depth = 0
    while True:
        n = 1 << depth
        for i in range(-n, n + 1):
            v = poly_eval(du, Fraction(i, n))
            sup_lower = max(sup_lower, abs(v))
        if sup_lower**2 >= target:
            left_ok = True
            break
        if depth > 24:
            left_ok = False
            break
        depth += 1

    # upper bound: interval evaluation on a subdivision, refined until the
    # right inequality (in squared form) is certified
    bits = 64
    pieces = 8
    right_ok = False
    sup_upper = Fraction(0)
    while True:
        sup_upper = Fraction(0)
        for i in range(pieces):
            lo = Fraction(-1) + Fraction(2 * i, pieces)
            hi = Fraction(-1) + Fraction(2 * (i + 1), pieces)
            box = _box_eval(du, lo, hi).abs()
            sup_upper = max(sup_upper, box.hi)
        # sup <= sqrt2 (sqrt A + sqrt B)  <=>  sup^2 <= 2 (A + B + 2 sqrt(AB))
        rhs_lower = 2 * (A + B + 2 * _sqrt_lower(A * B, bits))
        if sup_upper**2 <= rhs_lower:
            right_ok = True
            break
        if pieces > 4096 or bits > PRECISION_CAP:
            break
        pieces *= 2
        bits *= 2

    if not (left_ok and right_ok):
        raise UndecidableAtCap("sup-norm comparison could not be certified")
    return SobolevRecord(j, A, B, sup_lower, sup_upper, left_ok, right_ok)
