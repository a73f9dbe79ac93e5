from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gasketcert.similitude import (
    F1,
    F2,
    F3,
    IFS,
    T,
    NotSimilar,
    OutOfClass,
    Similitude,
    format_similitude,
    from_triple,
    parse_similitude,
)
from gasketcert.surd import Point, TriPoint, lattice_point

P1 = lattice_point(Fraction(1, 2), Fraction(1, 2))
P2, P3 = Point.of(0, 0), Point.of(1, 0)

tripoints = st.builds(
    lambda a, b, k: TriPoint.from_oblique(a, b, k),
    st.integers(-16, 16), st.integers(-16, 16), st.integers(0, 4),
)
sims = st.builds(Similitude, st.integers(0, 5), st.booleans(), st.integers(-2, 4), tripoints)
points = st.builds(
    lambda x, y: lattice_point(Fraction(x, 16), Fraction(y, 16)),
    st.integers(-64, 64), st.integers(-64, 64),
)


def test_T_on_marked_points():
    assert T.apply(P3) == P1
    assert T.apply(P1) == lattice_point(Fraction(1, 4), Fraction(1, 4))
    assert T.apply(P2) == lattice_point(Fraction(3, 4), Fraction(1, 4))


def test_T_fixed_point_and_powers():
    assert T.fixed_point() == lattice_point(Fraction(3, 7), Fraction(2, 7))
    assert T.compose(T).rot == 4 and T.compose(T).e == 2
    t3 = T.power(3)
    assert t3.rot == 0 and not t3.refl and t3.e == 3
    assert t3.t.to_point() == lattice_point(Fraction(3, 8), Fraction(1, 4))


def test_T_inverse():
    inv = T.inverse()
    assert (inv.rot, inv.refl, inv.e) == (4, False, -1)
    assert inv.t.to_point() == lattice_point(0, 1)
    assert T.compose(inv).is_identity()


def test_gasket_maps():
    assert F2.apply(P2) == lattice_point(Fraction(1, 4), Fraction(1, 4))
    assert F3.apply(P2) == Point.of(Fraction(1, 2), 0)
    assert F1.contractive and not T.inverse().contractive


@given(sims, sims, points)
def test_compose_is_application_order(f, g, p):
    assert f.compose(g).apply(p) == f.apply(g.apply(p))


@given(sims, sims, sims)
def test_compose_associative(f, g, h):
    assert f.compose(g).compose(h) == f.compose(g.compose(h))


@given(sims, points)
def test_inverse_round_trip(f, p):
    assert f.inverse().apply(f.apply(p)) == p
    assert f.compose(f.inverse()).is_identity()


@given(sims, points, points)
def test_similarity_ratio(f, p, q):
    from gasketcert.surd import sqdist

    assert sqdist(f.apply(p), f.apply(q)) == sqdist(p, q) * f.scale ** 2


@given(sims)
def test_text_round_trip(f):
    assert parse_similitude(format_similitude(f)) == f


def test_text_form():
    assert str(T) == "rot=2*60 refl=0 scale=2^-1 t=(3/4, 1/4*sqrt3)"
    with pytest.raises(ValueError):
        parse_similitude("rot=7*60 refl=0 scale=2^-1 t=(0, 0)")


@given(sims)
def test_from_triple_recovers_map(f):
    src = (P1, P2, P3)
    assert from_triple(src, [f.apply(p) for p in src]) == f


def test_from_triple_errors():
    src = (P1, P2, P3)
    with pytest.raises(NotSimilar):
        from_triple(src, (P1, P2, Point.of(2, 0)))
    # scale 1/3 is a similitude but not in the lattice class
    third = [Point(p.x / 3, p.y / 3) for p in src]
    with pytest.raises(OutOfClass):
        from_triple(src, third)
    with pytest.raises(ValueError):
        from_triple((P2, P3, Point.of(2, 0)), src)


def test_ifs_contractive_only():
    IFS((F1, F2, F3))
    with pytest.raises(ValueError):
        IFS((F1, T.inverse()))
    with pytest.raises(ValueError):
        IFS(())
