"""Exact scalars in Q[u]/(u^2 - p), i.e. rationals with a formal square root of p."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

__all__ = ["QSqrt", "as_fraction", "u_power"]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


class QSqrt:
    """Element a + b*u with u^2 = p, a and b rational.

    Instances are immutable and hashable. Mixing elements with different p
    raises ``ValueError``; plain ints and Fractions coerce with b = 0.
    """

    __slots__ = ("a", "b", "p")

    def __init__(self, a=0, b=0, p: int = 2):
        if p < 2:
            raise ValueError("p must be at least 2")
        object.__setattr__(self, "a", as_fraction(a))
        object.__setattr__(self, "b", as_fraction(b))
        object.__setattr__(self, "p", int(p))

    def __setattr__(self, name, value):
        raise AttributeError("QSqrt is immutable")

    @classmethod
    def u(cls, p: int) -> "QSqrt":
        return cls(0, 1, p)

    def _coerce(self, other):
        if isinstance(other, QSqrt):
            if other.p != self.p:
                raise ValueError(f"mixed rings: u^2={self.p} vs u^2={other.p}")
            return other
        if isinstance(other, (int, Fraction, Rational)):
            return QSqrt(other, 0, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QSqrt(self.a + o.a, self.b + o.b, self.p)

    __radd__ = __add__

    def __neg__(self):
        return QSqrt(-self.a, -self.b, self.p)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QSqrt(self.a - o.a, self.b - o.b, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b, c, d = self.a, self.b, o.a, o.b
        return QSqrt(a * c + b * d * self.p, a * d + b * c, self.p)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.p * self.b * self.b

    def conjugate_root(self) -> "QSqrt":
        """The Galois conjugate a - b*u (not complex conjugation)."""
        return QSqrt(self.a, -self.b, self.p)

    def inverse(self) -> "QSqrt":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero element of Q[u]/(u^2-p)")
        return QSqrt(self.a / n, -self.b / n, self.p)

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

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = QSqrt(1, 0, self.p)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, QSqrt):
            return (self.a, self.b, self.p) == (other.a, other.b, other.p) or (
                self.b == 0 and other.b == 0 and self.a == other.a
            )
        if isinstance(other, (int, Fraction, Rational)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.p))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def is_rational(self) -> bool:
        return self.b == 0

    def rational(self) -> Fraction:
        if self.b:
            raise ValueError(f"{self} is irrational")
        return self.a

    def __float__(self):
        return float(self.a) + float(self.b) * self.p ** 0.5

    def __complex__(self):
        return complex(float(self))

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(p)."""
        a, b = self.a, self.b
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with p*b^2
        diff = a * a - self.p * b * b
        return sa if diff > 0 else (0 if diff == 0 else sb)

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __lt__(self, other):
        return (self - other).sign() < 0

    def conjugate(self) -> "QSqrt":
        # complex conjugation is trivial on this real field
        return self

    def __repr__(self):
        if self.b == 0:
            return f"QSqrt({self.a}, p={self.p})"
        return f"QSqrt({self.a} + {self.b}*u, p={self.p})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*sqrt({self.p})"
        return f"{self.a} + {self.b}*sqrt({self.p})"


def u_power(k: int, p: int) -> QSqrt:
    """u**k = p**(k/2) exactly."""
    if k % 2 == 0:
        return QSqrt(Fraction(p) ** (k // 2), 0, p)
    return QSqrt(0, Fraction(p) ** ((k - 1) // 2), p)

