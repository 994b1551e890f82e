"""Number fields with certified complex embeddings.

A field is Q[t]/(m(t)) for a monic irreducible m over Q together with a
chosen root of m, tracked by an exact isolating rectangle with rational
corners (sympy's root isolation does the exact root counting; rectangles
only ever shrink).  Elements are dense coefficient tuples; all arithmetic
is exact Fraction arithmetic mod m.  Enclosing boxes for embedded values
come from plain interval Horner evaluation over the rectangle, so they
are exact outward enclosures with no rounding step anywhere.

Factorization over an extension uses Trager's norm method: shift by an
integer multiple of the generator until the norm (a resultant, computed
over Q) is squarefree, factor the norm over Q, and pull each factor back
with a gcd over the field.  For an irreducible polynomial the squarefree
norm is itself irreducible and serves directly as the minimal polynomial
of a primitive element of the extended field.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import sympy
from sympy import CRootOf, Poly, Symbol

from .errors import ExtensionFailure
from .intervals import CI, RI
from .polynomials import udeg, uderiv, udivmod, ugcd, umul, umonic, utrim

_T = Symbol("_qal_t")
_Z = Symbol("_qal_z")

_REFINE_CAP = 80  # rectangle halvings before giving up a certification


def _to_sympy_poly(coeffs: list[Fraction], sym) -> Poly:
    return Poly([sympy.Rational(c.numerator, c.denominator)
                 for c in reversed(coeffs)], sym, domain="QQ")


def _from_sympy_poly(p: Poly) -> list[Fraction]:
    return [Fraction(c.p, c.q) for c in reversed(p.all_coeffs())]


def factor_rational_poly(coeffs: list[Fraction]) -> list[tuple[list[Fraction], int]]:
    """Monic irreducible factors over Q with multiplicities."""
    _, factors = _to_sympy_poly(coeffs, _Z).factor_list()
    out = []
    for f, mult in factors:
        dense = _from_sympy_poly(f)
        out.append((umonic(dense), int(mult)))
    return out


def _mpq_to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


class NumberField:
    """Q(gamma) for a chosen root gamma of a monic irreducible m over Q."""

    def __init__(self, minpoly: list[Fraction], root_index: int | None = None):
        minpoly = umonic(utrim([Fraction(c) for c in minpoly]))
        self.minpoly = tuple(minpoly)
        self.degree = udeg(minpoly)
        if self.degree < 1:
            raise ValueError("minimal polynomial must have positive degree")
        if self.degree == 1:
            # the rationals; gamma = -c0 is rational
            self.root = None
            self.root_index = None
            gamma = -minpoly[0]
            self._rect = (gamma, gamma, Fraction(0), Fraction(0))
        else:
            if root_index is None:
                raise ValueError("extension field needs a root index")
            self.root_index = root_index
            self.root = CRootOf(_to_sympy_poly(minpoly, _T).as_expr(), root_index)
            self._interval = self.root._get_interval()
            self._rect = self._rect_from_interval()
        # reduction table for t^degree .. t^(2 degree - 2)
        self._reduction = self._build_reduction()

    def _build_reduction(self):
        g = self.degree
        rows = []
        current = [-c for c in self.minpoly[:g]]  # t^g mod m
        rows.append(list(current))
        for _ in range(g - 2):
            shifted = [Fraction(0)] + current
            if len(shifted) > g:
                top = shifted[g]
                shifted = shifted[:g]
                for i in range(g):
                    shifted[i] += top * rows[0][i]
            current = shifted
            rows.append(list(current))
        return rows

    def _rect_from_interval(self):
        iv = self._interval
        if self.root.is_real:
            a, b = _mpq_to_fraction(iv.a), _mpq_to_fraction(iv.b)
            return (a, b, Fraction(0), Fraction(0))
        return (_mpq_to_fraction(iv.ax), _mpq_to_fraction(iv.bx),
                _mpq_to_fraction(iv.ay), _mpq_to_fraction(iv.by))

    def refine(self):
        if self.root is not None:
            self._interval = self._interval.refine()
            self._rect = self._rect_from_interval()

    @property
    def is_real(self) -> bool:
        return self.root is None or bool(self.root.is_real)

    def real_embedding_count(self) -> int:
        if self.degree == 1:
            return 1
        p = _to_sympy_poly(list(self.minpoly), _T)
        return int(p.count_roots())

    def gamma_box(self) -> CI:
        a, b, c, d = self._rect
        return CI(RI(a, b), RI(c, d))

    # -- elements --------------------------------------------------------

    def element(self, coeffs) -> "FieldElement":
        g = self.degree
        if isinstance(coeffs, (int, Fraction)):
            vec = [Fraction(coeffs)] + [Fraction(0)] * (g - 1)
        else:
            vec = [Fraction(c) for c in coeffs]
            vec += [Fraction(0)] * (g - len(vec))
        return FieldElement(self, tuple(vec[:g]))

    def zero(self) -> "FieldElement":
        return self.element(0)

    def one(self) -> "FieldElement":
        return self.element(1)

    def generator(self) -> "FieldElement":
        if self.degree == 1:
            return self.element(-self.minpoly[0])
        return self.element([0, 1])

    def _reduce(self, vec: list[Fraction]) -> tuple[Fraction, ...]:
        g = self.degree
        out = list(vec[:g]) + [Fraction(0)] * max(0, g - len(vec))
        for p in range(len(vec) - 1, g - 1, -1):
            c = vec[p]
            if c:
                row = self._reduction[p - g]
                for i in range(g):
                    out[i] += c * row[i]
        return tuple(out[:g])

    def __eq__(self, other):
        return (isinstance(other, NumberField)
                and self.minpoly == other.minpoly
                and self.root_index == other.root_index)

    def __hash__(self):
        return hash((self.minpoly, self.root_index))

    def __repr__(self):
        if self.degree == 1:
            return "QQ"
        return f"NumberField(deg={self.degree}, root={self.root_index})"


QQ = NumberField([Fraction(0), Fraction(1)])  # Q itself, gamma = 0


class FieldElement:
    __slots__ = ("field", "rep")

    def __init__(self, field: NumberField, rep: tuple[Fraction, ...]):
        self.field = field
        self.rep = rep

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field == self.field:
                return other
            if other.field.degree == 1:
                return self.field.element(other.rep[0])
            if self.field.degree == 1:
                return NotImplemented
            raise ValueError("elements of different fields")
        if isinstance(other, (int, Fraction)):
            return self.field.element(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field,
                            tuple(a + b for a, b in zip(self.rep, o.rep)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.rep))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        g = self.field.degree
        prod = [Fraction(0)] * (2 * g - 1)
        for i, a in enumerate(self.rep):
            if not a:
                continue
            for j, b in enumerate(o.rep):
                if b:
                    prod[i + j] += a * b
        return FieldElement(self.field, self.field._reduce(prod))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if not self:
            raise ZeroDivisionError("inverse of zero field element")
        # extended Euclid in Q[t]: u * rep + v * m = gcd = const
        a = utrim(list(self.rep))
        b = list(self.field.minpoly)
        s0, s1 = [Fraction(1)], []
        while b:
            q, r = udivmod(a, b)
            a, b = b, r
            s0, s1 = s1, _usub(s0, umul(q, s1))
        lead = a[-1]
        inv = [c / lead for c in s0]
        return FieldElement(self.field, self.field._reduce(inv))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.rep == o.rep

    def __hash__(self):
        return hash((self.field, self.rep))

    def __bool__(self):
        return any(self.rep)

    def is_rational(self) -> bool:
        return not any(self.rep[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.rep[0]

    def box(self) -> CI:
        gb = self.field.gamma_box()
        acc = CI(RI.point(0), RI.point(0))
        for c in reversed(self.rep):
            acc = acc * gb + CI(RI.point(c), RI.point(0))
        return acc

    def lift(self) -> list[Fraction]:
        """Representative polynomial coefficients in Q[t]."""
        return utrim(list(self.rep))

    def __repr__(self):
        return f"FieldElement({list(self.rep)})"


def _usub(p, q):
    from .polynomials import usub
    return usub(p, q)


# -- certified-value identification ---------------------------------------------


def value_minpoly(a: FieldElement) -> list[Fraction]:
    """Minimal polynomial over Q of the embedded value of a.

    The characteristic polynomial Res_t(m(t), z - rep(t)) is a power of
    the minimal polynomial; the radical is extracted by factoring.
    """
    if a.is_rational():
        return [-a.rep[0], Fraction(1)]
    m = _to_sympy_poly(list(a.field.minpoly), _T)
    rep = _to_sympy_poly(a.lift(), _T)
    char = sympy.resultant(m.as_expr(), _Z - rep.as_expr(), _T)
    dense = _from_sympy_poly(Poly(char, _Z))
    factors = factor_rational_poly(dense)
    if len(factors) == 1:
        return factors[0][0]
    # identify the factor vanishing at the embedded value by exclusion
    candidates = [f for f, _ in factors]
    for _ in range(_REFINE_CAP):
        box = a.box()
        alive = []
        for f in candidates:
            val = _eval_box(f, box)
            if not (val.re.excludes_zero() or val.im.excludes_zero()):
                alive.append(f)
        if len(alive) == 1:
            return alive[0]
        a.field.refine()
    raise ExtensionFailure("could not isolate the minimal polynomial factor")


def _eval_box(coeffs: list[Fraction], box: CI) -> CI:
    acc = CI(RI.point(0), RI.point(0))
    for c in reversed(coeffs):
        acc = acc * box + CI(RI.point(c), RI.point(0))
    return acc


def identify_root(a: FieldElement) -> tuple[list[Fraction], int]:
    """Locate the embedded value of a as a specific root of its minimal
    polynomial: returns (minpoly, root index).  Decided by shrinking the
    value box until it meets exactly one isolating rectangle."""
    h = value_minpoly(a)
    if udeg(h) == 1:
        return h, 0
    hp = _to_sympy_poly(h, _T)
    roots = [CRootOf(hp.as_expr(), i) for i in range(udeg(h))]
    intervals = [r._get_interval() for r in roots]

    def rect(i):
        if roots[i].is_real:
            return (_mpq_to_fraction(intervals[i].a),
                    _mpq_to_fraction(intervals[i].b),
                    Fraction(0), Fraction(0))
        return (_mpq_to_fraction(intervals[i].ax),
                _mpq_to_fraction(intervals[i].bx),
                _mpq_to_fraction(intervals[i].ay),
                _mpq_to_fraction(intervals[i].by))

    for _ in range(_REFINE_CAP):
        box = a.box()
        alive = []
        for i in range(len(roots)):
            ax, bx, ay, by = rect(i)
            if box.re.hi < ax or bx < box.re.lo or box.im.hi < ay or by < box.im.lo:
                continue
            alive.append(i)
        if len(alive) == 1:
            return h, alive[0]
        a.field.refine()
        intervals = [iv.refine() for iv in intervals]
    raise ExtensionFailure("could not identify the embedded root")


def is_real_certified(a: FieldElement) -> bool:
    """Exact realness of the embedded value of a."""
    if a.field.is_real or a.is_rational():
        return True
    for _ in range(8):
        if a.box().im.excludes_zero():
            return False
        a.field.refine()
    h, idx = identify_root(a)
    if udeg(h) == 1:
        return True
    return bool(CRootOf(_to_sympy_poly(h, _T).as_expr(), idx).is_real)


def im_excludes_zero(a: FieldElement) -> bool | None:
    """Certified nonzero imaginary part (True), certified real (False),
    or None when the element could not be decided within the cap."""
    if a.field.is_real or a.is_rational():
        return False
    for _ in range(_REFINE_CAP):
        if a.box().im.excludes_zero():
            return True
        if is_real_certified(a):
            return False
        a.field.refine()
    return None


# -- AlgebraicNumber: the certified public view ----------------------------------


@dataclass
class AlgebraicNumber:
    """A field element together with its identified minimal polynomial and
    an isolating rectangle (rational corners) certified by exact root
    counting to contain exactly this one root."""

    element: FieldElement
    minpoly: list[Fraction]
    root_index: int
    rectangle: tuple[Fraction, Fraction, Fraction, Fraction]

    @staticmethod
    def identify(a: FieldElement) -> "AlgebraicNumber":
        h, idx = identify_root(a)
        if udeg(h) == 1:
            v = -h[0]
            return AlgebraicNumber(a, h, 0, (v, v, Fraction(0), Fraction(0)))
        root = CRootOf(_to_sympy_poly(h, _T).as_expr(), idx)
        iv = root._get_interval()
        if root.is_real:
            rect = (_mpq_to_fraction(iv.a), _mpq_to_fraction(iv.b),
                    Fraction(0), Fraction(0))
        else:
            rect = (_mpq_to_fraction(iv.ax), _mpq_to_fraction(iv.bx),
                    _mpq_to_fraction(iv.ay), _mpq_to_fraction(iv.by))
        return AlgebraicNumber(a, h, idx, rect)

    def is_real(self) -> bool:
        return self.rectangle[2] == self.rectangle[3] == 0 or \
            bool(CRootOf(_to_sympy_poly(self.minpoly, _T).as_expr(),
                         self.root_index).is_real)

    def to_json(self):
        from .rationals import format_fraction
        return {"minpoly": [format_fraction(c) for c in self.minpoly],
                "root_index": self.root_index,
                "rectangle": [format_fraction(c) for c in self.rectangle]}


# -- factorization over a field ---------------------------------------------------


def squarefree_decomposition(field: NumberField, f: list[FieldElement]) \
        -> list[tuple[list[FieldElement], int]]:
    """Yun-style squarefree decomposition over the field (char 0)."""
    f = utrim(list(f))
    out = []
    g = ugcd(f, uderiv(f))
    w = udivmod(f, g)[0]
    mult = 1
    while udeg(w) > 0:
        y = ugcd(w, g)
        part = udivmod(w, y)[0]
        if udeg(part) > 0:
            out.append((part, mult))
        w = y
        g = udivmod(g, y)[0]
        mult += 1
    return out


def factor_over_field(field: NumberField, f: list[FieldElement]) \
        -> list[tuple[list[FieldElement], int]]:
    """Monic irreducible factors of f over the field, with multiplicities."""
    out = []
    for part, mult in squarefree_decomposition(field, f):
        for factor in _factor_squarefree(field, part):
            out.append((factor, mult))
    return out


def _factor_squarefree(field: NumberField, f: list[FieldElement]) \
        -> list[list[FieldElement]]:
    f = umonic(f)
    if udeg(f) == 1:
        return [f]
    if field.degree == 1:
        rational = [c.as_fraction() for c in f]
        return [[field.element(c) for c in fac]
                for fac, _ in factor_rational_poly(rational)]
    shift, norm = _squarefree_norm(field, f)
    factors = factor_rational_poly(norm)
    gamma = field.generator()
    out = []
    for n_i, _ in factors:
        ni_shifted = _compose_shift(field, n_i, gamma, shift)
        g = ugcd(f, ni_shifted)
        if udeg(g) >= 1:
            out.append(umonic(g))
    total = sum(udeg(g) for g in out)
    if total != udeg(f):
        raise ExtensionFailure("norm factorization lost degree")
    return out


def _squarefree_norm(field: NumberField, f: list[FieldElement]) \
        -> tuple[int, list[Fraction]]:
    """Find integer s with squarefree norm of f(z - s*gamma); return
    (s, norm)."""
    m = _to_sympy_poly(list(field.minpoly), _T)
    for s in range(0, 40):
        shifted = _shift_poly(field, f, s)
        expr = Fraction(0)
        zpow = sympy.Integer(1)
        acc = sympy.Integer(0)
        for i, c in enumerate(shifted):
            rep = _to_sympy_poly(c.lift() or [Fraction(0)], _T).as_expr()
            acc = acc + rep * _Z**i
        norm = sympy.resultant(m.as_expr(), acc, _T)
        dense = _from_sympy_poly(Poly(norm, _Z))
        der = uderiv(dense)
        if udeg(ugcd(dense, der)) == 0:
            return s, dense
    raise ExtensionFailure("no squarefree norm found within the shift range")


def _shift_poly(field: NumberField, f: list[FieldElement], s: int) \
        -> list[FieldElement]:
    """f(z - s*gamma) by Horner substitution."""
    gamma = field.generator()
    offset = field.element(-s) * gamma
    out = [f[-1]]
    for c in reversed(f[:-1]):
        # out * (z + offset) + c
        new = [field.zero()] + out
        for i in range(len(out)):
            new[i] = new[i] + out[i] * offset
        new[0] = new[0] + c
        out = new
    return out


def _compose_shift(field: NumberField, rational_poly: list[Fraction],
                   gamma: FieldElement, s: int) -> list[FieldElement]:
    """rational_poly(z + s*gamma) over the field."""
    f = [field.element(c) for c in rational_poly]
    out = [f[-1]]
    offset = field.element(s) * gamma
    for c in reversed(f[:-1]):
        new = [field.zero()] + out
        for i in range(len(out)):
            new[i] = new[i] + out[i] * offset
        new[0] = new[0] + c
        out = new
    return out


@dataclass
class Extension:
    field: NumberField
    embed: callable            # old FieldElement -> new FieldElement
    new_root: FieldElement     # the chosen root of the defining polynomial


def extend_field(field: NumberField, h: list[FieldElement]) -> Extension:
    """Extend the field by one root of an irreducible polynomial h.

    Over Q the root index of the new minimal polynomial is chosen
    canonically (last in sympy's root ordering, preferring the upper half
    plane).  Over a proper extension, Trager's squarefree norm is the new
    minimal polynomial; the old generator is recovered inside the new
    field as the unique common root of its minimal polynomial and the
    shifted defining polynomial, certified by rectangle refinement.
    """
    h = umonic(h)
    if udeg(h) == 1:
        root = -h[0]
        return Extension(field, lambda a: a, root if isinstance(root, FieldElement)
                         else field.element(root))
    if field.degree == 1:
        dense = [c.as_fraction() for c in h]
        L = NumberField(dense, root_index=udeg(h) - 1)
        return Extension(L, lambda a, L=L: L.element(a.as_fraction()),
                         L.generator())

    s, norm = _squarefree_norm(field, h)
    candidates = list(range(udeg(norm)))
    chosen = None
    gamma_rep = None
    for idx in reversed(candidates):
        L = NumberField(norm, root_index=idx)
        found = _gamma_inside(L, field, h, s)
        if found is not None:
            chosen, gamma_rep = L, found
            break
    if chosen is None:
        raise ExtensionFailure("no compatible root of the norm polynomial")
    L = chosen

    def embed(a: FieldElement, L=L, gamma_rep=gamma_rep) -> FieldElement:
        acc = L.zero()
        for c in reversed(a.lift() or [Fraction(0)]):
            acc = acc * gamma_rep + L.element(c)
        return acc

    # beta = delta - s*gamma
    beta = L.generator() - L.element(s) * gamma_rep
    return Extension(L, embed, beta)


def _gamma_inside(L: NumberField, K: NumberField, h: list[FieldElement],
                  s: int) -> FieldElement | None:
    """Inside L = Q(delta), find gamma as the unique common root of
    m_K(t) and h~(t, delta - s t); return None if delta is incompatible
    with K's chosen embedding."""
    # build h~(t, delta - s t) as a polynomial in t over L
    delta = L.generator()
    minus_s = L.element(-s)
    # delta - s*t has t-coefficients [delta, -s]
    lin = [delta, minus_s]
    acc = [L.zero()]
    # Horner in z: h = sum c_i z^i with c_i in K, lift c_i to Q[t] -> L[t]
    for c in reversed(h):
        acc = _poly_mul_L(acc, lin, L)
        lifted = c.lift() or [Fraction(0)]
        base = [L.element(q) for q in lifted]  # polynomial in t with L-coeffs
        acc = _poly_add_L(acc, base, L)
    m_in_L = [L.element(q) for q in K.minpoly]
    g = ugcd(acc, m_in_L)
    if udeg(g) != 1:
        return None
    gamma_cand = -(g[0] / g[1])
    # certify that gamma_cand embeds onto K's chosen root
    for _ in range(_REFINE_CAP):
        cb = gamma_cand.box()
        kb = K.gamma_box()
        if cb.re.hi < kb.re.lo or kb.re.hi < cb.re.lo \
                or cb.im.hi < kb.im.lo or kb.im.hi < cb.im.lo:
            return None
        # both boxes contain roots of m_K; disjointness from all other
        # roots of m_K certifies equality
        others = _other_root_rects(K)
        inside_unique = all(cb.re.hi < ax or bx < cb.re.lo
                            or cb.im.hi < ay or by < cb.im.lo
                            for ax, bx, ay, by in others)
        if inside_unique:
            return gamma_cand
        L.refine()
        K.refine()
    raise ExtensionFailure("could not certify the embedded generator")


def _other_root_rects(K: NumberField):
    p = _to_sympy_poly(list(K.minpoly), _T)
    out = []
    for i in range(K.degree):
        if i == K.root_index:
            continue
        r = CRootOf(p.as_expr(), i)
        iv = r._get_interval()
        if r.is_real:
            out.append((_mpq_to_fraction(iv.a), _mpq_to_fraction(iv.b),
                        Fraction(0), Fraction(0)))
        else:
            out.append((_mpq_to_fraction(iv.ax), _mpq_to_fraction(iv.bx),
                        _mpq_to_fraction(iv.ay), _mpq_to_fraction(iv.by)))
    return out


def _poly_mul_L(p, q, L):
    if not p or not q:
        return []
    out = [L.zero()] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return utrim(out)


def _poly_add_L(p, q, L):
    n = max(len(p), len(q))
    out = []
    for i in range(n):
        a = p[i] if i < len(p) else L.zero()
        b = q[i] if i < len(q) else L.zero()
        out.append(a + b)
    return utrim(out)
