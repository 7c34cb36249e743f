"""Exact real quadratic surds ``a + b*sqrt(d)`` with rational ``a``, ``b``.

Exceptional weights of a cone Laplacian are roots of
``g**2 + (m - 2)*g - e = 0``; for a rational eigenvalue ``e`` they live in
``Q(sqrt(d))`` for a single square-free ``d``.  Ordering and equality are
decided exactly, including between surds over different radicands, so a
weight is never misclassified by rounding.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering
from numbers import Rational

__all__ = ["QuadSurd", "as_fraction", "squarefree_split"]


def as_fraction(x) -> Fraction:
    """Convert ints, Fractions, decimal strings and floats to a Fraction.

    Floats are read through their shortest ``repr`` so that ``2.2`` means
    ``11/5``, which is what a person typing ``2.2`` intends.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r}")
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, QuadSurd) and x.is_rational:
        return x.a
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(k, d)`` with ``n == k*k*d`` and ``d`` square-free."""
    if n < 0:
        raise ValueError("negative radicand")
    if n == 0:
        return 0, 1
    k, d = 1, 1
    rest = n
    p = 2
    while p * p <= rest:
        e = 0
        while rest % p == 0:
            rest //= p
            e += 1
        k *= p ** (e // 2)
        if e % 2:
            d *= p
        p += 1 if p == 2 else 2
    d *= rest
    return k, d


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def _sign_one(x: Fraction, y: Fraction, d: int) -> int:
    """Sign of ``x + y*sqrt(d)``."""
    if y == 0 or d == 0:
        return _sgn(x)
    sx, sy = _sgn(x), _sgn(y)
    if sx == 0 or sx == sy:
        return sy
    lhs, rhs = x * x, y * y * d
    if lhs > rhs:
        return sx
    if lhs < rhs:
        return sy
    return 0


def _sign_two(x: Fraction, y: Fraction, d1: int, z: Fraction, d2: int) -> int:
    """Sign of ``x + y*sqrt(d1) + z*sqrt(d2)`` for square-free ``d1``, ``d2``."""
    if d1 == d2:
        return _sign_one(x, y + z, d1)
    if y == 0:
        return _sign_one(x, z, d2)
    if z == 0:
        return _sign_one(x, y, d1)
    # sign of t = y*sqrt(d1) + z*sqrt(d2); y^2 d1 == z^2 d2 is impossible here
    if _sgn(y) == _sgn(z):
        st = _sgn(y)
    else:
        st = _sgn(y) if y * y * d1 > z * z * d2 else _sgn(z)
    sx = _sgn(x)
    if sx == 0 or sx == st:
        return st
    # compare t^2 = y^2 d1 + z^2 d2 + 2yz sqrt(d1 d2) with x^2
    k, dd = squarefree_split(d1 * d2)
    s = _sign_one(y * y * d1 + z * z * d2 - x * x, 2 * y * z * k, dd)
    if s > 0:
        return st
    if s < 0:
        return sx
    return 0


@total_ordering
class QuadSurd:
    """The real number ``a + b*sqrt(d)``; ``d`` is square-free and ``d == 1``
    exactly when the number is rational (then ``b == 0``)."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d: int = 1):
        a, b = as_fraction(a), as_fraction(b)
        d = int(d)
        if d < 0:
            raise ValueError("radicand must be non-negative")
        k, d = squarefree_split(d)
        b *= k
        if d == 1 or b == 0:
            a, b, d = a + b, Fraction(0), 1
        self.a, self.b, self.d = a, b, d

    @classmethod
    def sqrt(cls, q) -> "QuadSurd":
        """Exact square root of a non-negative rational."""
        q = as_fraction(q)
        if q < 0:
            raise ValueError("square root of a negative number")
        num, den = q.numerator, q.denominator
        k, d = squarefree_split(num * den)
        return cls(0, Fraction(k, den), d)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def conjugate(self) -> "QuadSurd":
        return QuadSurd(self.a, -self.b, self.d)

    def _coerce(self, other):
        if isinstance(other, QuadSurd):
            return other
        try:
            return QuadSurd(as_fraction(other))
        except (TypeError, ValueError):
            return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_rational:
            return QuadSurd(self.a + o.a, self.b, self.d)
        if self.is_rational or self.d == o.d:
            return QuadSurd(self.a + o.a, self.b + o.b, o.d)
        raise ValueError("sum of surds over different radicands is not a quadratic surd")

    __radd__ = __add__

    def __neg__(self):
        return QuadSurd(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_rational:
            return QuadSurd(self.a * o.a, self.b * o.a, self.d)
        if self.is_rational:
            return QuadSurd(self.a * o.a, self.a * o.b, o.d)
        if self.d != o.d:
            raise ValueError("product of surds over different radicands is not a quadratic surd")
        return QuadSurd(self.a * o.a + self.b * o.b * self.d, self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def sign(self) -> int:
        return _sign_one(self.a, self.b, self.d)

    def _cmp(self, other) -> int | None:
        o = self._coerce(other)
        if o is None:
            return None
        return _sign_two(self.a - o.a, self.b, self.d, -o.b, o.d)

    def __eq__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c == 0

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __hash__(self):
        if self.is_rational:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __repr__(self):
        return f"QuadSurd({self.a}, {self.b}, {self.d})"

    def __str__(self):
        if self.is_rational:
            return _frac_str(self.a)
        r = math.lcm(self.a.denominator, self.b.denominator)
        p = int(self.a * r)
        q = int(self.b * r)
        rad = f"sqrt({self.d})" if abs(q) == 1 else f"{abs(q)}*sqrt({self.d})"
        sign = "-" if q < 0 else "+"
        body = f"{sign}{rad}" if p == 0 and q < 0 else (rad if p == 0 else f"{p}{sign}{rad}")
        return f"({body})" if r == 1 else f"({body})/{r}"


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
