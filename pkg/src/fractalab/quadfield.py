"""Exact arithmetic in real quadratic fields Q(sqrt(d)).

Contraction ratios like the golden-ratio Bernoulli convolution's
r = (sqrt(5)-1)/2 are irrational, but frequencies q = r^{-n} must be
represented exactly: the non-decay phenomenon at Pisot scales is invisible
once q drifts by a floating-point epsilon.  A QuadExact value a + b*sqrt(d)
with rational a, b supports the ring operations needed for ratio products,
frequency powers and affine images, and converts to mpmath floats at an
explicit working precision only at the last moment.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

import mpmath


def _is_square(n):
    if n < 0:
        return False
    s = isqrt(n)
    return s * s == n


class QuadExact:
    """a + b*sqrt(d) with Fraction coefficients; d a fixed non-square > 1."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d=5):
        if d <= 1 or _is_square(d):
            raise ValueError("d must be a non-square integer > 1")
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = d

    # -- ring structure -------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, QuadExact):
            if other.d != self.d:
                raise ValueError("mixed quadratic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadExact(other, 0, self.d)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExact(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExact(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExact(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExact(
            self.a * o.a + self.d * self.b * o.b,
            self.a * o.b + self.b * o.a,
            self.d,
        )

    __rmul__ = __mul__

    def inverse(self):
        norm = self.a * self.a - self.d * self.b * self.b
        if norm == 0:
            raise ZeroDivisionError("zero norm")
        return QuadExact(self.a / norm, -self.b / norm, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = QuadExact(1, 0, self.d)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparisons (exact, via sign of a + b*sqrt(d)) ------------------

    def sign(self):
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        # a + b*sqrt(d): compare a^2 vs d*b^2 with the signs of a, b
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        lhs = a * a
        rhs = self.d * b * b
        if a > 0:  # b < 0: sign of a^2 - d b^2
            return (lhs > rhs) - (lhs < rhs)
        return (rhs > lhs) - (rhs < lhs)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __le__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() <= 0

    def __gt__(self, other):
        return not self <= other

    def __ge__(self, other):
        return not self < other

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- conversions -----------------------------------------------------

    def to_mpf(self, dps=50):
        with mpmath.workdps(dps):
            return mpmath.mpf(self.a.numerator) / self.a.denominator + (
                mpmath.mpf(self.b.numerator) / self.b.denominator
            ) * mpmath.sqrt(self.d)

    def __float__(self):
        return float(self.to_mpf(40))

    def rational_bounds(self, rel=Fraction(1, 10**30)):
        """Certified Fraction pair lo <= self <= hi with hi-lo <= pad."""
        if self.b == 0:
            return self.a, self.a
        with mpmath.workdps(60):
            v = self.to_mpf(60)
            approx = Fraction(mpmath.nstr(v, 40, strip_zeros=False))
        pad = abs(approx) * rel + rel
        lo, hi = approx - pad, approx + pad
        # the 60-dps value is accurate to far better than the pad; verify
        assert QuadExact(lo, 0, self.d) <= self <= QuadExact(hi, 0, self.d)
        return lo, hi

    def frac_part_mpf(self, dps=60):
        """self mod 1 as an mpf at the given precision (for phases)."""
        with mpmath.workdps(dps):
            v = self.to_mpf(dps)
            return v - mpmath.floor(v)

    def __repr__(self):
        if self.b == 0:
            return f"QuadExact({self.a})"
        return f"QuadExact({self.a} + {self.b}*sqrt({self.d}))"


def exact_value(x):
    """Normalize an exact numeric input to Fraction or QuadExact."""
    if isinstance(x, QuadExact):
        return x if x.b != 0 else x.a
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact value: {x!r}")


def is_exact(x):
    return isinstance(x, (int, Fraction, QuadExact))


def golden_ratio_conjugate():
    """(sqrt(5) - 1)/2, the contraction ratio 1/phi."""
    return QuadExact(Fraction(-1, 2), Fraction(1, 2), 5)
