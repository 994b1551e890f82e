"""Polynomial arithmetic: sparse multivariate, dense univariate, and
univariate rational functions.

Multivariate polynomials carry exact rational (or Gaussian rational)
coefficients in a sparse exponent-vector map with a canonical variable
ordering (x before y; numbered variables x1, x2, ... by index).  The
dense univariate helpers operate on plain coefficient lists over any
field-like coefficient type and back the Sturm-chain machinery.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import QalSyntaxError, ZeroPolynomialError

Exponents = tuple[int, ...]


def _var_key(name: str):
    m = re.fullmatch(r"([a-zA-Z]+)(\d*)", name)
    if not m:
        return (name, 0)
    return (m.group(1), int(m.group(2) or 0))


class MultiPoly:
    """Sparse multivariate polynomial over Fraction (or any field-like
    coefficient supporting exact arithmetic)."""

    __slots__ = ("vars", "coeffs")

    def __init__(self, vars: tuple[str, ...], coeffs: dict[Exponents, object] | None = None):
        self.vars = tuple(vars)
        self.coeffs: dict[Exponents, object] = {}
        if coeffs:
            for exps, c in coeffs.items():
                if c != 0:
                    self.coeffs[tuple(exps)] = c

    # -- constructors -----------------------------------------------------

    @staticmethod
    def constant(value, vars: tuple[str, ...] = ()) -> "MultiPoly":
        value = Fraction(value) if isinstance(value, int) else value
        return MultiPoly(vars, {(0,) * len(vars): value})

    @staticmethod
    def variable(name: str, vars: tuple[str, ...] | None = None) -> "MultiPoly":
        vars = vars or (name,)
        exps = tuple(1 if v == name else 0 for v in vars)
        if name not in vars:
            raise ValueError(f"{name} not among {vars}")
        return MultiPoly(vars, {exps: Fraction(1)})

    def with_vars(self, vars: tuple[str, ...]) -> "MultiPoly":
        """Reindex onto a superset variable tuple."""
        pos = {v: vars.index(v) for v in self.vars}
        out: dict[Exponents, object] = {}
        for exps, c in self.coeffs.items():
            new = [0] * len(vars)
            for i, e in enumerate(exps):
                new[pos[self.vars[i]]] = e
            key = tuple(new)
            out[key] = out.get(key, 0) + c
        return MultiPoly(vars, out)

    @staticmethod
    def _aligned(a: "MultiPoly", b: "MultiPoly"):
        if a.vars == b.vars:
            return a, b
        merged = tuple(sorted(set(a.vars) | set(b.vars), key=_var_key))
        return a.with_vars(merged), b.with_vars(merged)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(other, self.vars)
        a, b = MultiPoly._aligned(self, other)
        out = dict(a.coeffs)
        for exps, c in b.coeffs.items():
            out[exps] = out.get(exps, 0) + c
        return MultiPoly(a.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.vars, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(other, self.vars)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return MultiPoly(self.vars)
            return MultiPoly(self.vars,
                             {e: c * other for e, c in self.coeffs.items()})
        a, b = MultiPoly._aligned(self, other)
        out: dict[Exponents, object] = {}
        for e1, c1 in a.coeffs.items():
            for e2, c2 in b.coeffs.items():
                key = tuple(x + y for x, y in zip(e1, e2))
                out[key] = out.get(key, 0) + c1 * c2
        return MultiPoly(a.vars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = MultiPoly.constant(1, self.vars)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(other, self.vars)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        a, b = MultiPoly._aligned(self, other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        return hash((self.vars, frozenset(self.coeffs.items())))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    # -- structure ----------------------------------------------------------

    def degree(self, var: str) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        if not self.coeffs:
            return -1
        i = self.vars.index(var)
        return max(e[i] for e in self.coeffs)

    def total_degree(self) -> int:
        if not self.coeffs:
            return -1
        return max(sum(e) for e in self.coeffs)

    def order(self) -> int:
        """Smallest total degree of a monomial; the local multiplicity at 0."""
        if not self.coeffs:
            raise ZeroPolynomialError("order of the zero polynomial")
        return min(sum(e) for e in self.coeffs)

    def coefficient(self, var: str, power: int) -> "MultiPoly":
        """Coefficient of var^power as a polynomial in the other variables."""
        i = self.vars.index(var)
        rest = tuple(v for v in self.vars if v != var)
        out: dict[Exponents, object] = {}
        for exps, c in self.coeffs.items():
            if exps[i] == power:
                key = tuple(e for n, e in enumerate(exps) if n != i)
                out[key] = out.get(key, 0) + c
        return MultiPoly(rest, out)

    def as_univariate(self, var: str) -> list["MultiPoly"]:
        """Dense coefficient list in var, entries in the remaining vars."""
        d = self.degree(var)
        return [self.coefficient(var, p) for p in range(d + 1)]

    def constant_term(self):
        return self.coeffs.get((0,) * len(self.vars), Fraction(0))

    def eval(self, assignment: dict[str, object]):
        """Full evaluation; every variable must be assigned."""
        total = 0
        for exps, c in self.coeffs.items():
            term = c
            for v, e in zip(self.vars, exps):
                if e:
                    term = term * assignment[v] ** e
            total = total + term
        return total

    def substitute(self, var: str, replacement: "MultiPoly") -> "MultiPoly":
        """Substitute a polynomial for one variable."""
        i = self.vars.index(var)
        rest = tuple(v for v in self.vars if v != var)
        merged = tuple(sorted(set(rest) | set(replacement.vars), key=_var_key))
        out = MultiPoly(merged)
        by_power: dict[int, MultiPoly] = {}
        for exps, c in self.coeffs.items():
            key = tuple(e for n, e in enumerate(exps) if n != i)
            p = exps[i]
            by_power.setdefault(p, MultiPoly(rest))
            by_power[p] = by_power[p] + MultiPoly(rest, {key: c})
        rep = replacement.with_vars(merged)
        for p, coeff_poly in by_power.items():
            out = out + coeff_poly.with_vars(merged) * rep**p
        return out

    def derivative(self, var: str) -> "MultiPoly":
        i = self.vars.index(var)
        out: dict[Exponents, object] = {}
        for exps, c in self.coeffs.items():
            if exps[i]:
                key = tuple(e - 1 if n == i else e for n, e in enumerate(exps))
                out[key] = out.get(key, 0) + c * exps[i]
        return MultiPoly(self.vars, out)

    # -- printing ------------------------------------------------------------

    def _monomial_str(self, exps: Exponents, c) -> str:
        parts = []
        for v, e in zip(self.vars, exps):
            if e == 1:
                parts.append(v)
            elif e > 1:
                parts.append(f"{v}^{e}")
        if not parts:
            return _coeff_str(c)
        if c == 1:
            return "*".join(parts)
        if c == -1:
            return "-" + "*".join(parts)
        return _coeff_str(c) + "*" + "*".join(parts)

    def __str__(self):
        if not self.coeffs:
            return "0"
        keys = sorted(self.coeffs, key=lambda e: (sum(e), e), reverse=True)
        out = self._monomial_str(keys[0], self.coeffs[keys[0]])
        for k in keys[1:]:
            term = self._monomial_str(k, self.coeffs[k])
            out += " - " + term[1:] if term.startswith("-") else " + " + term
        return out

    def __repr__(self):
        return f"MultiPoly({self})"


def _coeff_str(c) -> str:
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return str(c)


# -- parser ---------------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<num>\d+(/\d+)?)
  | (?P<var>[a-zA-Z]\w*)
  | (?P<op>[-+*^()])
  | (?P<ws>\s+)
  | (?P<bad>.)
""", re.VERBOSE)


def _tokenize(text: str):
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        if m.lastgroup == "ws":
            continue
        if m.lastgroup == "bad":
            raise QalSyntaxError(f"unexpected character {m.group()!r}", m.start())
        tokens.append((m.lastgroup, m.group(), m.start()))
    tokens.append(("end", "", len(text)))
    return tokens


class _PolyParser:
    """Recursive descent over:  expr := term (('+'|'-') term)*
    term := factor ('*' factor)*  ;  factor := ('-')* atom ('^' int)?
    atom := number | variable | '(' expr ')'."""

    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.idx = 0

    def peek(self):
        return self.tokens[self.idx]

    def advance(self):
        tok = self.tokens[self.idx]
        self.idx += 1
        return tok

    def parse(self) -> MultiPoly:
        out = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise QalSyntaxError(f"unexpected {val!r}", pos)
        return out

    def expr(self) -> MultiPoly:
        out = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.advance()
                rhs = self.term()
                out = out + rhs if val == "+" else out - rhs
            else:
                return out

    def term(self) -> MultiPoly:
        out = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.advance()
                out = out * self.factor()
            else:
                return out

    def factor(self) -> MultiPoly:
        kind, val, pos = self.peek()
        if kind == "op" and val == "-":
            self.advance()
            return -self.factor()
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.advance()
            kind, val, pos = self.advance()
            if kind != "num" or "/" in val:
                raise QalSyntaxError("exponent must be a nonnegative integer", pos)
            return base ** int(val)
        return base

    def atom(self) -> MultiPoly:
        kind, val, pos = self.advance()
        if kind == "num":
            if "/" in val:
                p, q = val.split("/")
                return MultiPoly.constant(Fraction(int(p), int(q)))
            return MultiPoly.constant(Fraction(int(val)))
        if kind == "var":
            return MultiPoly.variable(val)
        if kind == "op" and val == "(":
            inner = self.expr()
            kind, val, pos = self.advance()
            if val != ")":
                raise QalSyntaxError("expected ')'", pos)
            return inner
        raise QalSyntaxError(f"unexpected {val!r}" if val else "unexpected end of input", pos)


def parse_polynomial(text: str) -> MultiPoly:
    """Parse the polynomial grammar: variables x, y or x1..xn, integer or
    rational coefficients, '^' powers, '+', '-', '*', parentheses."""
    poly = _PolyParser(text).parse()
    merged = tuple(sorted(set(poly.vars), key=_var_key))
    return poly.with_vars(merged) if merged != poly.vars else poly


# -- dense univariate helpers over a field-like coefficient type -----------------

def utrim(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def udeg(p: list) -> int:
    return len(p) - 1


def uadd(p: list, q: list) -> list:
    n = max(len(p), len(q))
    out = []
    for i in range(n):
        a = p[i] if i < len(p) else 0
        b = q[i] if i < len(q) else 0
        out.append(a + b)
    return utrim(out)


def uneg(p: list) -> list:
    return [-c for c in p]


def usub(p: list, q: list) -> list:
    return uadd(p, uneg(q))


def umul(p: list, q: list) -> list:
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return utrim(out)


def uscale(p: list, c) -> list:
    if not c:
        return []
    return [a * c for a in p]


def udivmod(p: list, q: list) -> tuple[list, list]:
    """Exact division with remainder over a field."""
    q = utrim(list(q))
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = utrim(list(p))
    lead = q[-1]
    quot = [0] * max(0, len(rem) - len(q) + 1)
    while len(rem) >= len(q):
        if not rem[-1]:
            rem.pop()
            continue
        shift = len(rem) - len(q)
        factor = rem[-1] / lead
        quot[shift] = factor
        for i in range(len(q) - 1):
            rem[shift + i] = rem[shift + i] - factor * q[i]
        rem.pop()
    return utrim(quot), utrim(rem)


def uderiv(p: list) -> list:
    return utrim([c * (i + 1) for i, c in enumerate(p[1:])])


def ueval(p: list, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def umonic(p: list) -> list:
    if not p:
        return p
    lead = p[-1]
    return [c / lead for c in p]


def ugcd(p: list, q: list) -> list:
    """Monic gcd over a field via the Euclidean algorithm."""
    a, b = list(p), list(q)
    while b:
        a, b = b, udivmod(a, b)[1]
    return umonic(a)


# -- univariate rational functions over Q ----------------------------------------

class RatFunc:
    """Rational function num/den with Fraction-coefficient polynomials,
    normalized to coprime parts with a monic denominator.  Serves as the
    coefficient field Q(x) for Sturm chains of plane curves."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if isinstance(num, (int, Fraction)):
            num = [Fraction(num)] if num else []
        num = utrim([Fraction(c) for c in num])
        if den is None:
            den = [Fraction(1)]
        elif isinstance(den, (int, Fraction)):
            den = [Fraction(den)]
        den = utrim([Fraction(c) for c in den])
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if num:
            g = ugcd(num, den)
            if udeg(g) > 0:
                num = udivmod(num, g)[0]
                den = udivmod(den, g)[0]
        lead = den[-1]
        self.num = [c / lead for c in num]
        self.den = [c / lead for c in den]

    @staticmethod
    def x() -> "RatFunc":
        return RatFunc([Fraction(0), Fraction(1)])

    @staticmethod
    def _coerce(v):
        if isinstance(v, RatFunc):
            return v
        if isinstance(v, (int, Fraction)):
            return RatFunc(v)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RatFunc(uadd(umul(self.num, o.den), umul(o.num, self.den)),
                       umul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(uneg(self.num), self.den)

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
        return RatFunc(umul(self.num, o.num), umul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not o.num:
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(umul(self.num, o.den), umul(self.den, o.num))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((tuple(self.num), tuple(self.den)))

    def __bool__(self):
        return bool(self.num)

    def is_zero(self) -> bool:
        return not self.num

    def order_at_zero(self) -> int:
        """Order of vanishing at x = 0 (negative for a pole)."""
        if not self.num:
            raise ZeroPolynomialError("order of the zero function")
        on = next(i for i, c in enumerate(self.num) if c)
        od = next(i for i, c in enumerate(self.den) if c)
        return on - od

    def sign_near_zero(self, side: str) -> int:
        """Sign on (0, eps) for side='plus' or on (-eps, 0) for side='minus';
        determined exactly by the lowest-order coefficients."""
        if not self.num:
            return 0
        on = next(i for i, c in enumerate(self.num) if c)
        od = next(i for i, c in enumerate(self.den) if c)
        sign = (1 if self.num[on] > 0 else -1) * (1 if self.den[od] > 0 else -1)
        if side == "minus" and (on + od) % 2 == 1:
            sign = -sign
        return sign

    def eval(self, x: Fraction) -> Fraction:
        d = ueval(self.den, x)
        if d == 0:
            raise ZeroDivisionError(f"pole at {x}")
        return ueval(self.num, x) / d

    def __repr__(self):
        return f"RatFunc({self.num}, {self.den})"
