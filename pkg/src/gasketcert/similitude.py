"""Similitudes of the triangular lattice.

A :class:`Similitude` is ``x -> 2^-e * R(rot*60deg) * F^refl * x + t`` where
``F`` reflects across the x-axis.  The reflect-then-rotate normal form makes
the representation unique, so maps can be compared and deduplicated
structurally.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .surd import (
    Point,
    Surd,
    TriPoint,
    cross,
    format_point,
    parse_tripoint,
    sqdist,
    surd_sign,
)

_HALF = Fraction(1, 2)
# (cos, sin) of k*60 degrees; sin as a multiple of sqrt3
_COS = (Fraction(1), _HALF, -_HALF, Fraction(-1), -_HALF, _HALF)
_SIN3 = (Fraction(0), _HALF, _HALF, Fraction(0), -_HALF, -_HALF)


class NotSimilar(ValueError):
    """Source and target triples are not related by any similitude."""


class OutOfClass(ValueError):
    """A similitude exists but its angle or scale is outside the lattice class."""


class NoFixedPoint(ValueError):
    pass


def _rot60(a: int, b: int) -> tuple[int, int]:
    # e1 -> e2, e2 -> e2 - e1
    return -b, a + b


def _reflect(a: int, b: int) -> tuple[int, int]:
    # e1 -> e1, e2 -> e1 - e2
    return a + b, -b


def linear_oblique(rot: int, refl: bool, a: int, b: int) -> tuple[int, int]:
    """Apply ``R^rot F^refl`` (no scaling) to oblique integer coordinates."""
    if refl:
        a, b = _reflect(a, b)
    for _ in range(rot % 6):
        a, b = _rot60(a, b)
    return a, b


def _oblique_add(p: tuple[int, int, int], q: tuple[int, int, int]) -> tuple[int, int, int]:
    (a1, b1, k1), (a2, b2, k2) = p, q
    k = max(k1, k2)
    return (a1 << (k - k1)) + (a2 << (k - k2)), (b1 << (k - k1)) + (b2 << (k - k2)), k


@dataclass(frozen=True, order=True)
class Similitude:
    rot: int
    refl: bool
    e: int
    t: TriPoint

    def __post_init__(self) -> None:
        if not 0 <= self.rot < 6:
            object.__setattr__(self, "rot", self.rot % 6)

    # -- constructors ------------------------------------------------------
    @classmethod
    def identity(cls) -> "Similitude":
        return cls(0, False, 0, TriPoint(0, 0, 0))

    @classmethod
    def homothety(cls, e: int, t: TriPoint | None = None) -> "Similitude":
        return cls(0, False, e, t if t is not None else TriPoint(0, 0, 0))

    # -- properties ----------------------------------------------------------
    @property
    def scale(self) -> Fraction:
        return Fraction(1, 2 ** self.e) if self.e >= 0 else Fraction(2 ** -self.e)

    @property
    def contractive(self) -> bool:
        return self.e >= 1

    def is_identity(self) -> bool:
        return self == Similitude.identity()

    # -- action ----------------------------------------------------------------
    def apply(self, p: Point) -> Point:
        """Exact image of a general point."""
        x, y = p
        if self.refl:
            y = -y
        c = _COS[self.rot]
        s = Surd(0, _SIN3[self.rot])
        k = self.scale
        tx, ty = self.t.to_point()
        return Point((x * c - y * s) * k + tx, (x * s + y * c) * k + ty)

    def apply_oblique(self, a: int, b: int, k: int) -> tuple[int, int, int]:
        """Image of the oblique lattice point ``(a, b) / 2^k`` (unreduced)."""
        a, b = linear_oblique(self.rot, self.refl, a, b)
        k += self.e
        if k < 0:
            a, b, k = a << -k, b << -k, 0
        return _oblique_add((a, b, k), self.t.oblique())

    def apply_tri(self, p: TriPoint) -> TriPoint:
        a, b, k = self.apply_oblique(*p.oblique())
        return TriPoint.from_oblique(a, b, k)

    def __call__(self, p: Point) -> Point:
        return self.apply(p)

    # -- algebra -----------------------------------------------------------------
    def compose(self, g: "Similitude") -> "Similitude":
        """``self o g``: apply ``g`` first."""
        # R^a F^s R^b F^u = R^(a + (-1)^s b) F^(s+u)
        rot = (self.rot + (-g.rot if self.refl else g.rot)) % 6
        refl = self.refl != g.refl
        t = self.apply_tri(g.t)
        return Similitude(rot, refl, self.e + g.e, t)

    def inverse(self) -> "Similitude":
        if self.refl:
            rot = self.rot  # reflections are involutions
        else:
            rot = (-self.rot) % 6
        lin = Similitude(rot, self.refl, -self.e, TriPoint(0, 0, 0))
        ta, tb, tk = lin.apply_oblique(*self.t.oblique())
        return Similitude(rot, self.refl, -self.e, TriPoint.from_oblique(-ta, -tb, tk))

    def power(self, k: int) -> "Similitude":
        if k < 0:
            return self.inverse().power(-k)
        out = Similitude.identity()
        for _ in range(k):
            out = self.compose(out)
        return out

    def fixed_point(self) -> Point:
        """Solve ``(I - L) p = t`` over Q(sqrt3); raises NoFixedPoint when
        ``I - L`` is singular."""
        # columns of L
        l1 = self.apply(Point.of(1, 0)) - self.apply(Point.of(0, 0))
        l2 = self.apply(Point.of(0, 1)) - self.apply(Point.of(0, 0))
        m11, m21 = 1 - l1.x, -l1.y
        m12, m22 = -l2.x, 1 - l2.y
        det = m11 * m22 - m12 * m21
        if surd_sign(det) == 0:
            raise NoFixedPoint(f"{self} has no unique fixed point")
        tx, ty = self.t.to_point()
        p = Point((tx * m22 - m12 * ty) / det, (m11 * ty - m21 * tx) / det)
        if self.apply(p) != p:
            raise AssertionError("fixed point failed exact re-check")
        return p

    # -- text ---------------------------------------------------------------------
    def __str__(self) -> str:
        return format_similitude(self)


# x -> 1/2 R(120deg) x + (3/4, sqrt3/4)
T = Similitude(2, False, 1, TriPoint.make(3, 1, 2))

# the gasket's own IFS maps (bottom-left, top, bottom-right)
F1 = Similitude(0, False, 1, TriPoint(0, 0, 0))
F2 = Similitude(0, False, 1, TriPoint.make(1, 1, 2))
F3 = Similitude(0, False, 1, TriPoint.from_oblique(1, 0, 1))


def format_similitude(f: Similitude) -> str:
    return f"rot={f.rot}*60 refl={int(f.refl)} scale=2^{-f.e} t={format_point(f.t.to_point())}"


def parse_similitude(text: str) -> Similitude:
    m = re.fullmatch(
        r"\s*rot=([0-5])\*60\s+refl=([01])\s+scale=2\^(-?\d+)\s+t=(\(.*\))\s*", text
    )
    if not m:
        raise ValueError(f"malformed similitude: {text!r}")
    return Similitude(
        int(m.group(1)), m.group(2) == "1", -int(m.group(3)), parse_tripoint(m.group(4))
    )


def _ratio(p: Point, q: Point, p2: Point, q2: Point) -> Surd:
    d = sqdist(p, q)
    if surd_sign(d) == 0:
        raise ValueError("source points must be distinct")
    return sqdist(p2, q2) / d


def from_triple(src: Sequence[Point], dst: Sequence[Point]) -> Similitude:
    """The unique lattice similitude mapping ``src[i] -> dst[i]``."""
    s0, s1, s2 = src
    d0, d1, d2 = dst
    o_src = surd_sign(cross(s0, s1, s2))
    if o_src == 0:
        raise ValueError("source triple is collinear")
    o_dst = surd_sign(cross(d0, d1, d2))
    if o_dst == 0:
        raise NotSimilar("target triple is degenerate")
    r01 = _ratio(s0, s1, d0, d1)
    if r01 != _ratio(s1, s2, d1, d2) or r01 != _ratio(s0, s2, d0, d2):
        raise NotSimilar("side ratios differ")
    refl = o_src != o_dst
    # squared ratio must be 4^-e
    if not r01.is_rational() or r01.a <= 0:
        raise OutOfClass(f"squared scale {r01} is not a power of four")
    num, den = r01.a.numerator, r01.a.denominator
    if num == 1 and den & (den - 1) == 0 and (den.bit_length() - 1) % 2 == 0:
        e = (den.bit_length() - 1) // 2
    elif den == 1 and num & (num - 1) == 0 and (num.bit_length() - 1) % 2 == 0:
        e = -((num.bit_length() - 1) // 2)
    else:
        raise OutOfClass(f"squared scale {r01} is not a power of four")
    target = d1 - d0
    zero = TriPoint(0, 0, 0)
    for rot in range(6):
        lin = Similitude(rot, refl, e, zero)
        if lin.apply(s1) - lin.apply(s0) == target:
            t_point = d0 - lin.apply(s0)
            t = TriPoint.from_point(t_point)
            if t is None:
                raise OutOfClass(f"translation {format_point(t_point)} is off the lattice")
            f = Similitude(rot, refl, e, t)
            if f.apply(s2) != d2:
                raise NotSimilar("third point does not match")
            return f
    raise OutOfClass("rotation is not a multiple of 60 degrees")


@dataclass(frozen=True)
class IFS:
    maps: tuple[Similitude, ...]

    def __post_init__(self) -> None:
        if not self.maps:
            raise ValueError("an IFS needs at least one map")
        for f in self.maps:
            if not f.contractive:
                raise ValueError(f"{f} is not contractive")

    def __len__(self) -> int:
        return len(self.maps)

    def __iter__(self):
        return iter(self.maps)
