"""Certified interval arithmetic with exact rational endpoints.

Ring operations on :class:`RI` are exact (Fraction endpoints, no rounding
at all).  Transcendental functions go through mpmath's interval context at
a requested bit precision and come back as exact dyadic endpoints, so the
enclosure property is preserved end to end.

Comparisons that an interval cannot decide are retried at doubled
precision by :func:`decide` up to the global cap (``QAL_PRECISION_BITS``
environment variable, default 256 bits, hard cap 4096).
"""

from __future__ import annotations

import os
from fractions import Fraction
from typing import Callable

import mpmath.libmp as _libmp
from mpmath import iv as _iv
from mpmath import mpf as _mpf

from .errors import UndecidableAtCap
from .rationals import pow_bounds, root_bounds

PRECISION_CAP = 4096
_DEFAULT_BITS = 256


def default_bits() -> int:
    raw = os.environ.get("QAL_PRECISION_BITS")
    if not raw:
        return _DEFAULT_BITS
    try:
        bits = int(raw)
    except ValueError:
        return _DEFAULT_BITS
    return max(8, min(bits, PRECISION_CAP))


class RI:
    """Closed real interval [lo, hi] with Fraction endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = Fraction(lo)
        hi = lo if hi is None else Fraction(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    @staticmethod
    def point(x) -> "RI":
        return RI(x)

    @staticmethod
    def of(x) -> "RI":
        return x if isinstance(x, RI) else RI(x)

    # -- exact ring operations -------------------------------------------

    def __add__(self, other):
        o = RI.of(other)
        return RI(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return RI(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-RI.of(other))

    def __rsub__(self, other):
        return RI.of(other) + (-self)

    def __mul__(self, other):
        o = RI.of(other)
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return RI(min(ps), max(ps))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RI.of(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError(f"divisor interval {o} contains 0")
        inv = RI(1 / o.hi, 1 / o.lo)
        return self * inv

    def __rtruediv__(self, other):
        return RI.of(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n == 0:
            return RI(1)
        if n < 0:
            return RI(1) / self**(-n)
        out = RI(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        # even powers of sign-mixed intervals must clamp at 0
        if out.lo < 0 and self.lo <= 0 <= self.hi:
            out = RI(0, out.hi)
        return out

    def abs(self) -> "RI":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return RI(0, max(-self.lo, self.hi))

    # -- structure ---------------------------------------------------------

    def width(self) -> Fraction:
        return self.hi - self.lo

    def rel_width(self) -> Fraction:
        m = min(abs(self.lo), abs(self.hi))
        if m == 0:
            return Fraction(0) if self.lo == self.hi else Fraction(1) << 62
        return self.width() / m

    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def hull(self, other: "RI") -> "RI":
        return RI(min(self.lo, other.lo), max(self.hi, other.hi))

    def contains(self, x) -> bool:
        if isinstance(x, RI):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= Fraction(x) <= self.hi

    def is_point(self) -> bool:
        return self.lo == self.hi

    # -- certified comparisons (None means undecided) ----------------------

    def cmp(self, other) -> int | None:
        o = RI.of(other)
        if self.hi < o.lo:
            return -1
        if self.lo > o.hi:
            return 1
        if self.is_point() and o.is_point():
            return 0
        return None

    def certainly_le(self, other) -> bool:
        return self.hi <= RI.of(other).lo

    def certainly_lt(self, other) -> bool:
        return self.hi < RI.of(other).lo

    def certainly_ge(self, other) -> bool:
        return self.lo >= RI.of(other).hi

    def certainly_gt(self, other) -> bool:
        return self.lo > RI.of(other).hi

    def certainly_positive(self) -> bool:
        return self.lo > 0

    def certainly_negative(self) -> bool:
        return self.hi < 0

    def excludes_zero(self) -> bool:
        return self.lo > 0 or self.hi < 0

    def __repr__(self):
        return f"RI({self.lo}, {self.hi})"

    def __str__(self):
        if self.is_point():
            return f"[{self.lo}]"
        return f"[{self.lo}, {self.hi}]"

    def to_json(self) -> dict:
        from .rationals import format_fraction
        return {"lo": format_fraction(self.lo), "hi": format_fraction(self.hi)}


def decide(predicate: Callable[[int], bool | None], start_bits: int | None = None,
           what: str = "comparison") -> bool:
    """Run ``predicate(bits)`` at escalating precision until it returns a
    bool; raise UndecidableAtCap if the cap is reached undecided."""
    bits = start_bits or default_bits()
    while True:
        result = predicate(bits)
        if result is not None:
            return result
        if bits >= PRECISION_CAP:
            raise UndecidableAtCap(f"{what} undecided at {PRECISION_CAP} bits")
        bits = min(bits * 2, PRECISION_CAP)


# -- mpmath bridge ----------------------------------------------------------

def _to_iv(x, bits: int):
    """Convert Fraction/int/RI to an mpmath interval enclosing it."""
    if isinstance(x, RI):
        lo = _to_iv(x.lo, bits)
        hi = _to_iv(x.hi, bits)
        return _iv.mpf([_mpf(lo.a), _mpf(hi.b)])
    f = Fraction(x)
    if f.denominator == 1:
        return _iv.mpf(f.numerator)
    return _iv.mpf(f.numerator) / _iv.mpf(f.denominator)


def _from_iv(x) -> RI:
    a_raw, b_raw = x._mpi_
    pa, qa = _libmp.to_rational(a_raw)
    pb, qb = _libmp.to_rational(b_raw)
    return RI(Fraction(pa, qa), Fraction(pb, qb))


def _with_prec(bits: int, fn):
    old = _iv.prec
    _iv.prec = bits + 16  # guard bits for the conversions at the boundary
    try:
        return fn()
    finally:
        _iv.prec = old


def iv_exp(x, bits: int) -> RI:
    return _with_prec(bits, lambda: _from_iv(_iv.exp(_to_iv(x, bits))))


def iv_log(x, bits: int) -> RI:
    return _with_prec(bits, lambda: _from_iv(_iv.log(_to_iv(x, bits))))


def iv_log_shift_e(x, bits: int) -> RI:
    """log(x + e) as a certified interval."""
    return _with_prec(bits, lambda: _from_iv(_iv.log(_to_iv(x, bits) + _iv.e)))


def iv_sin(x, bits: int) -> RI:
    return _with_prec(bits, lambda: _from_iv(_iv.sin(_to_iv(x, bits))))


def iv_cos(x, bits: int) -> RI:
    return _with_prec(bits, lambda: _from_iv(_iv.cos(_to_iv(x, bits))))


def iv_pow(base, expo, bits: int) -> RI:
    """base^expo for a positive base; expo may be Fraction or RI."""

    def run():
        b = _to_iv(base, bits)
        e = _to_iv(expo, bits)
        return _from_iv(b**e)

    return _with_prec(bits, run)


def ri_root(x: RI | Fraction, k: int, bits: int) -> RI:
    """Certified k-th root of a nonnegative interval or Fraction."""
    if isinstance(x, RI):
        lo, _ = root_bounds(max(x.lo, Fraction(0)), k, bits)
        _, hi = root_bounds(x.hi, k, bits)
        return RI(lo, hi)
    lo, hi = root_bounds(Fraction(x), k, bits)
    return RI(lo, hi)


def ri_pow_frac(x: RI | Fraction, s: Fraction, bits: int) -> RI:
    """x^s for positive x and rational s, outward rounded."""
    if isinstance(x, RI):
        if x.lo <= 0:
            raise ValueError("ri_pow_frac needs a positive base interval")
        los = pow_bounds(x.lo, s, bits)
        his = pow_bounds(x.hi, s, bits)
        if s >= 0:
            return RI(los[0], his[1])
        return RI(his[0], los[1])
    lo, hi = pow_bounds(Fraction(x), s, bits)
    return RI(lo, hi)


class CI:
    """Complex interval as an axis-aligned box (re, im are RI)."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=None):
        self.re = RI.of(re)
        self.im = RI.of(im if im is not None else 0)

    def __add__(self, other):
        o = other if isinstance(other, CI) else CI(other)
        return CI(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return CI(-self.re, -self.im)

    def __sub__(self, other):
        o = other if isinstance(other, CI) else CI(other)
        return CI(self.re - o.re, self.im - o.im)

    def __mul__(self, other):
        o = other if isinstance(other, CI) else CI(other)
        return CI(self.re * o.re - self.im * o.im,
                  self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def rotate_i(self, j: int) -> "CI":
        """Multiply by i^j exactly."""
        j %= 4
        if j == 0:
            return self
        if j == 1:
            return CI(-self.im, self.re)
        if j == 2:
            return CI(-self.re, -self.im)
        return CI(self.im, -self.re)

    def abs_sq(self) -> RI:
        return self.re**2 + self.im**2

    def pad(self, radius) -> "CI":
        """Grow both components by ±radius (a magnitude tail bound)."""
        r = Fraction(radius)
        return CI(RI(self.re.lo - r, self.re.hi + r),
                  RI(self.im.lo - r, self.im.hi + r))

    def contains(self, re, im=0) -> bool:
        return self.re.contains(re) and self.im.contains(im)

    def __repr__(self):
        return f"CI({self.re!r}, {self.im!r})"

    def to_json(self) -> dict:
        return {"re": self.re.to_json(), "im": self.im.to_json()}
