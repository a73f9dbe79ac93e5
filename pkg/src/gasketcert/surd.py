"""Exact arithmetic in Q(sqrt3) and exact planar points.

Every coordinate the verifier touches is of the form a + b*sqrt3 with
rational a, b.  Signs are decided without floating point: for mixed-sign
coefficients we compare a**2 with 3*b**2.

Two point types live here:

* :class:`Point` - a pair of :class:`Surd` coordinates (general case).
* :class:`TriPoint` - a triangular-lattice point ``(u/2^s, v*sqrt3/2^s)``
  with ``u = v (mod 2)``.  Internally the fast paths use *oblique* integer
  coordinates ``(A, B, k)`` meaning ``(A*e1 + B*e2) / 2^k`` with
  ``e1 = (1, 0)`` and ``e2 = (1/2, sqrt3/2)``; the two are related by
  ``u = 2A + B``, ``v = B``, ``s = k + 1``.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import NamedTuple, Union

Rational = Union[int, Fraction]

NEGATIVE, ZERO, POSITIVE = -1, 0, 1


def _frac(x: Rational) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Surd:
    """The number ``a + b*sqrt3`` with rational ``a`` and ``b``."""

    __slots__ = ("a", "b")

    def __init__(self, a: Rational = 0, b: Rational = 0) -> None:
        self.a = _frac(a)
        self.b = _frac(b)

    @classmethod
    def coerce(cls, x: "Surd | Rational") -> "Surd":
        if isinstance(x, Surd):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x, 0)
        raise TypeError(f"cannot coerce {type(x).__name__} to Surd")

    # -- structure ---------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, Surd):
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __repr__(self) -> str:
        return f"Surd({self.a!r}, {self.b!r})"

    def __str__(self) -> str:
        return format_surd(self)

    def is_rational(self) -> bool:
        return self.b == 0

    # -- field operations --------------------------------------------------
    def __add__(self, other: "Surd | Rational") -> "Surd":
        if isinstance(other, Surd):
            return Surd(self.a + other.a, self.b + other.b)
        if isinstance(other, (int, Fraction)):
            return Surd(self.a + other, self.b)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> "Surd":
        return Surd(-self.a, -self.b)

    def __sub__(self, other: "Surd | Rational") -> "Surd":
        if isinstance(other, Surd):
            return Surd(self.a - other.a, self.b - other.b)
        if isinstance(other, (int, Fraction)):
            return Surd(self.a - other, self.b)
        return NotImplemented

    def __rsub__(self, other: "Surd | Rational") -> "Surd":
        return (-self) + other

    def __mul__(self, other: "Surd | Rational") -> "Surd":
        if isinstance(other, Surd):
            a, b, c, d = self.a, self.b, other.a, other.b
            return Surd(a * c + 3 * b * d, a * d + b * c)
        if isinstance(other, (int, Fraction)):
            return Surd(self.a * other, self.b * other)
        return NotImplemented

    __rmul__ = __mul__

    def conjugate(self) -> "Surd":
        return Surd(self.a, -self.b)

    def norm(self) -> Fraction:
        """Field norm ``a^2 - 3 b^2`` (zero only for the zero element)."""
        return self.a * self.a - 3 * self.b * self.b

    def __truediv__(self, other: "Surd | Rational") -> "Surd":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("Surd division by zero")
            return Surd(self.a / other, self.b / other)
        if isinstance(other, Surd):
            n = other.norm()
            if n == 0:
                raise ZeroDivisionError("Surd division by zero")
            num = self * other.conjugate()
            return Surd(num.a / n, num.b / n)
        return NotImplemented

    def __rtruediv__(self, other: Rational) -> "Surd":
        return Surd.coerce(other) / self

    # -- order ---------------------------------------------------------------
    def sign(self) -> int:
        return surd_sign(self)

    def __lt__(self, other: "Surd | Rational") -> bool:
        return surd_sign(self - other) < 0

    def __le__(self, other: "Surd | Rational") -> bool:
        return surd_sign(self - other) <= 0

    def __gt__(self, other: "Surd | Rational") -> bool:
        return surd_sign(self - other) > 0

    def __ge__(self, other: "Surd | Rational") -> bool:
        return surd_sign(self - other) >= 0

    def __float__(self) -> float:
        # only for rendering and test oracles; never used in a decision
        return float(self.a) + float(self.b) * 3 ** 0.5


SQRT3 = Surd(0, 1)


def _rsign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def surd_sign(x: Surd) -> int:
    """Exact sign of ``a + b*sqrt3``: -1, 0 or +1."""
    sa, sb = _rsign(x.a), _rsign(x.b)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # mixed signs: |a| vs |b|*sqrt3, i.e. a^2 vs 3 b^2 (never equal unless 0)
    if x.a * x.a > 3 * x.b * x.b:
        return sa
    return sb


# -- text form ---------------------------------------------------------------

def format_surd(x: Surd) -> str:
    """Canonical text ``"a/b + c/d*sqrt3"`` with zero parts omitted."""
    if x.b == 0:
        return str(x.a)
    mag = abs(x.b)
    radical = "sqrt3" if mag == 1 else f"{mag}*sqrt3"
    if x.a == 0:
        return radical if x.b > 0 else f"-{radical}"
    return f"{x.a} {'+' if x.b > 0 else '-'} {radical}"


_TERM = re.compile(r"[+-]?[^+-]+")


def parse_surd(text: str) -> Surd:
    s = "".join(text.split())
    if not s:
        raise ValueError("empty Surd literal")
    a, b = Fraction(0), Fraction(0)
    pos = 0
    for m in _TERM.finditer(s):
        if m.start() != pos:
            raise ValueError(f"malformed Surd literal: {text!r}")
        pos = m.end()
        term = m.group()
        if term.endswith("sqrt3"):
            coef = term[: -len("sqrt3")]
            if coef.endswith("*"):
                coef = coef[:-1]
            if coef in ("", "+"):
                b += 1
            elif coef == "-":
                b -= 1
            else:
                b += Fraction(coef)
        else:
            a += Fraction(term)
    if pos != len(s):
        raise ValueError(f"malformed Surd literal: {text!r}")
    return Surd(a, b)


# -- points ------------------------------------------------------------------

class Point(NamedTuple):
    x: Surd
    y: Surd

    @classmethod
    def of(cls, x: "Surd | Rational", y: "Surd | Rational") -> "Point":
        return cls(Surd.coerce(x), Surd.coerce(y))

    def __add__(self, other):  # type: ignore[override]
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point") -> "Point":
        return Point(self.x - other.x, self.y - other.y)

    def scale(self, k: "Surd | Rational") -> "Point":
        return Point(self.x * k, self.y * k)

    def dot(self, other: "Point") -> Surd:
        return self.x * other.x + self.y * other.y

    def __str__(self) -> str:
        return format_point(self)


def lattice_point(x: Rational, y_over_sqrt3: Rational) -> Point:
    """Point ``(x, y_over_sqrt3 * sqrt3)``."""
    return Point(Surd(x, 0), Surd(0, y_over_sqrt3))


def sqdist(p: Point, q: Point) -> Surd:
    dx = p.x - q.x
    dy = p.y - q.y
    return dx * dx + dy * dy


def cross(o: Point, p: Point, q: Point) -> Surd:
    """z-component of ``(p - o) x (q - o)``."""
    return (p.x - o.x) * (q.y - o.y) - (p.y - o.y) * (q.x - o.x)


def format_point(p: Point) -> str:
    return f"({format_surd(p.x)}, {format_surd(p.y)})"


def parse_point(text: str) -> Point:
    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")) or s.count(",") != 1:
        raise ValueError(f"malformed point literal: {text!r}")
    xs, ys = s[1:-1].split(",")
    return Point(parse_surd(xs), parse_surd(ys))


def oblique_of(p: Point) -> tuple[Surd, Surd]:
    """Oblique coordinates ``(A, B)`` with ``p = A*e1 + B*e2``."""
    y_over_sqrt3 = Surd(p.y.b, p.y.a / 3)
    return p.x - y_over_sqrt3, y_over_sqrt3 * 2


def point_of_oblique(a: "Surd | Rational", b: "Surd | Rational") -> Point:
    a, b = Surd.coerce(a), Surd.coerce(b)
    half_b = b / 2
    return Point(a + half_b, half_b * SQRT3)


# -- triangular lattice ------------------------------------------------------

def reduce_oblique(a: int, b: int, k: int) -> tuple[int, int, int]:
    """Minimal-scale form of the oblique lattice point ``(a, b) / 2^k``."""
    if a == 0 and b == 0:
        return 0, 0, -1
    while not (a & 1) and not (b & 1):
        a >>= 1
        b >>= 1
        k -= 1
    return a, b, k


class TriPoint(NamedTuple):
    """Lattice point ``(u / 2^s, v*sqrt3 / 2^s)``; always canonical when
    built through :meth:`make` or :meth:`from_oblique`."""

    u: int
    v: int
    s: int

    @classmethod
    def make(cls, u: int, v: int, s: int) -> "TriPoint":
        if (u - v) & 1:
            raise ValueError(f"({u}, {v}) is not on the triangular lattice (u != v mod 2)")
        return cls.from_oblique((u - v) // 2, v, s - 1)

    @classmethod
    def from_oblique(cls, a: int, b: int, k: int) -> "TriPoint":
        a, b, k = reduce_oblique(a, b, k)
        if a == 0 and b == 0:
            return cls(0, 0, 0)
        return cls(2 * a + b, b, k + 1)

    def oblique(self) -> tuple[int, int, int]:
        if self.u == 0 and self.v == 0:
            return 0, 0, -1
        return (self.u - self.v) // 2, self.v, self.s - 1

    def oblique_at(self, k: int) -> tuple[int, int]:
        """Integer oblique coordinates at scale ``k`` (must be fine enough)."""
        a, b, k0 = self.oblique()
        if a == 0 and b == 0:
            return 0, 0
        if k < k0:
            raise ValueError(f"{self} is not on the 2^-{k} oblique grid")
        return a << (k - k0), b << (k - k0)

    def to_point(self) -> Point:
        d = Fraction(1, 2 ** self.s) if self.s >= 0 else Fraction(2 ** -self.s)
        return Point(Surd(self.u * d, 0), Surd(0, self.v * d))

    @classmethod
    def from_point(cls, p: Point) -> "TriPoint | None":
        """Canonical TriPoint for ``p``; ``None`` if ``p`` is off the lattice."""
        if p.x.b != 0 or p.y.a != 0:
            return None
        a = p.x.a - p.y.b
        b = 2 * p.y.b
        den = max(a.denominator, b.denominator)
        k = den.bit_length() - 1
        if den != 1 << k:
            return None
        ai, bi = a * den, b * den
        if ai.denominator != 1 or bi.denominator != 1:
            return None
        return cls.from_oblique(int(ai), int(bi), k)

    def __str__(self) -> str:
        return format_point(self.to_point())


def parse_tripoint(text: str) -> TriPoint:
    t = TriPoint.from_point(parse_point(text))
    if t is None:
        raise ValueError(f"{text!r} is not a triangular-lattice point")
    return t
