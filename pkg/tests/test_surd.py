from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gasketcert.surd import (
    SQRT3,
    Point,
    Surd,
    TriPoint,
    format_point,
    format_surd,
    lattice_point,
    parse_point,
    parse_surd,
    sqdist,
    surd_sign,
)

fracs = st.fractions(min_value=-50, max_value=50, max_denominator=64)
surds = st.builds(Surd, fracs, fracs)


def test_basic_ops():
    assert Surd(1) + Surd(0, 1) == Surd(1, 1)
    assert SQRT3 * SQRT3 == Surd(3)
    h = Fraction(1, 2)
    assert Surd(h, h) * Surd(h, -h) == Surd(Fraction(-1, 2))
    assert -Surd(1, 2) == Surd(-1, -2)


@pytest.mark.parametrize("x, sign", [
    (Surd(0), 0),
    (Surd(-1, 1), 1),
    (Surd(Fraction(7, 4), -1), 1),
    (Surd(Fraction(-7, 4), 1), -1),
    (Surd(2, -1), 1),
    (Surd(1, -1), -1),
])
def test_sign_examples(x, sign):
    assert surd_sign(x) == sign


@given(surds, surds, surds)
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x and x * y == y * x


@given(surds, surds)
def test_division_inverts_multiplication(x, y):
    if surd_sign(y) != 0:
        assert (x / y) * y == x


@given(surds)
def test_sign_matches_float(x):
    v = float(x.a) + float(x.b) * 3 ** 0.5
    if abs(v) > 1e-9:
        assert surd_sign(x) == (1 if v > 0 else -1)


def test_sign_matches_float_bulk():
    import random

    rng = random.Random(7)
    checked = 0
    for _ in range(10_000):
        x = Surd(Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 10**4)),
                 Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 10**4)))
        v = float(x)
        if abs(v) > 1e-9:
            assert surd_sign(x) == (1 if v > 0 else -1)
            checked += 1
    assert checked > 9000


@given(surds)
def test_text_round_trip(x):
    assert parse_surd(format_surd(x)) == x


def test_text_forms():
    assert format_surd(Surd(Fraction(1, 2), Fraction(3, 4))) == "1/2 + 3/4*sqrt3"
    assert format_surd(Surd(0, 1)) == "sqrt3"
    assert format_surd(Surd(0)) == "0"
    assert parse_surd("1*sqrt3") == SQRT3
    assert parse_surd("-1/2 - sqrt3") == Surd(Fraction(-1, 2), -1)
    with pytest.raises(ValueError):
        parse_surd("sqrt2")


def test_sqdist_examples():
    assert sqdist(Point.of(0, 0), Point.of(5, 0)) == Surd(25)
    p = lattice_point(Fraction(3, 8), Fraction(1, 4))
    assert sqdist(p, p) == Surd(0)
    # foot of the perpendicular from (3/8, sqrt3/4) onto (1/4, sqrt3/4)-(1/2, 0)
    a, b = lattice_point(Fraction(1, 4), Fraction(1, 4)), Point.of(Fraction(1, 2), 0)
    ab = b - a
    t = (p - a).dot(ab) / ab.dot(ab)
    assert sqdist(p, a + ab.scale(t)) == Surd(Fraction(3, 256))


lattice = st.tuples(st.integers(-40, 40), st.integers(-40, 40), st.integers(-3, 6))


@given(lattice, lattice, lattice)
def test_triangle_inequality_squared(p, q, r):
    def pt(x, y, s):
        k = Fraction(2) ** s
        return lattice_point(x / k, y / k)

    p, q, r = pt(*p), pt(*q), pt(*r)
    a, b, c = sqdist(p, r), sqdist(p, q), sqdist(q, r)
    assert sqdist(p, q) == sqdist(q, p)
    # d(p,r) <= d(p,q) + d(q,r)  <=>  a - b - c <= 2 sqrt(bc)
    lhs = a - b - c
    if surd_sign(lhs) > 0:
        assert surd_sign(lhs * lhs - b * c * 4) <= 0


@given(st.integers(-200, 200), st.integers(-200, 200), st.integers(-6, 8))
def test_tripoint_round_trip(u, v, s):
    if (u - v) % 2:
        v += 1
    t = TriPoint.from_oblique((u - v) // 2, v, s - 1)
    back = TriPoint.from_point(t.to_point())
    assert back == t
    assert TriPoint.from_point(back.to_point()) == back


def test_tripoint_embedding():
    t = TriPoint.make(3, 1, 2)
    assert t.to_point() == lattice_point(Fraction(3, 4), Fraction(1, 4))
    assert TriPoint.from_point(lattice_point(Fraction(3, 7), Fraction(2, 7))) is None
    with pytest.raises(ValueError):
        TriPoint.make(1, 2, 0)


def test_point_text_round_trip():
    p = lattice_point(Fraction(7, 16), Fraction(5, 16))
    assert format_point(p) == "(7/16, 5/16*sqrt3)"
    assert parse_point(format_point(p)) == p
