"""Decision procedures on lattice triangles and gasket unions.

Each procedure answers with a :class:`Decision`.  A "holds" verdict is
structural (every branch ended in a cell-of relation, or every branch was
pruned), a "fails" verdict carries an exact witness point that has been
re-checked through the general Q(sqrt3) membership route, and running out
of depth budget gives "inconclusive" rather than a guess.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .model import (
    GasketPiece,
    GasketUnion,
    LatticeTriangle,
    is_cell,
    lattice_in_union,
    oblique_point,
    point_in_gasket,
    point_in_union,
)
from .similitude import Similitude
from .surd import Point, Surd, format_point, point_of_oblique, sqdist, surd_sign

DEFAULT_DEPTH = 12


class Verdict(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"


class WitnessError(AssertionError):
    """A witness did not survive exact re-verification."""


@dataclass(frozen=True)
class Decision:
    verdict: Verdict
    witness: Point | None = None
    depth_used: int = 0

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.HOLDS

    @property
    def fails(self) -> bool:
        return self.verdict is Verdict.FAILS

    @property
    def inconclusive(self) -> bool:
        return self.verdict is Verdict.INCONCLUSIVE

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "witness": None if self.witness is None else format_point(self.witness),
            "depth_used": self.depth_used,
        }


# -- triangle predicates ---------------------------------------------------

def _common(t1: LatticeTriangle, t2: LatticeTriangle) -> int:
    return max(t1.n, t2.n)


def triangles_intersect(t1: LatticeTriangle, t2: LatticeTriangle) -> bool:
    """Closed solid triangles meet (separating-axis test on the three lattice
    directions, which are all the edge normals)."""
    k = _common(t1, t2)
    b1, b2 = t1.bounds(k), t2.bounds(k)
    for i in (0, 2, 4):
        if b1[i + 1] < b2[i] or b2[i + 1] < b1[i]:
            return False
    return True


def interiors_meet(t1: LatticeTriangle, t2: LatticeTriangle) -> bool:
    k = _common(t1, t2)
    b1, b2 = t1.bounds(k), t2.bounds(k)
    for i in (0, 2, 4):
        if b1[i + 1] <= b2[i] or b2[i + 1] <= b1[i]:
            return False
    return True


def triangle_in_triangle(a: LatticeTriangle, b: LatticeTriangle) -> bool:
    """All vertices of ``a`` lie in solid ``b``."""
    return all(b.contains_oblique(x, y, a.n) for x, y in a.vertices_oblique())


def _halfplanes(t: LatticeTriangle, k: int) -> list[tuple[int, int, int]]:
    # (ca, cb, r): ca*A + cb*B >= r at scale k
    a0, a1, b0, b1, s0, s1 = t.bounds(k)
    if t.up:
        return [(1, 0, a0), (0, 1, b0), (-1, -1, -s1)]
    return [(-1, 0, -a1), (0, -1, -b1), (1, 1, s0)]


def _clip_edge(p0, p1, planes) -> tuple[Fraction, Fraction] | None:
    lo, hi = Fraction(0), Fraction(1)
    for ca, cb, r in planes:
        f0 = ca * p0[0] + cb * p0[1]
        df = ca * (p1[0] - p0[0]) + cb * (p1[1] - p0[1])
        if df == 0:
            if f0 < r:
                return None
        elif df > 0:
            lo = max(lo, Fraction(r - f0, df))
        else:
            hi = min(hi, Fraction(r - f0, df))
        if lo > hi:
            return None
    return lo, hi


def _boundary_witness(d: LatticeTriangle, c: LatticeTriangle) -> Point:
    """A point of ``d`` on the boundary of ``c`` (caller ensures one exists)."""
    k = _common(d, c)
    planes = _halfplanes(d, k)
    sh = k - c.n
    verts = [(x << sh, y << sh) for x, y in c.vertices_oblique()]
    for i in range(3):
        p0, p1 = verts[i], verts[(i + 1) % 3]
        span = _clip_edge(p0, p1, planes)
        if span is not None:
            t = span[0]
            px = p0[0] + t * (p1[0] - p0[0])
            py = p0[1] + t * (p1[1] - p0[1])
            scale = Fraction(1, 2 ** k) if k >= 0 else Fraction(2 ** -k)
            return point_of_oblique(px * scale, py * scale)
    raise AssertionError("no boundary contact between triangles that should touch")


def _check_meet_witness(w: Point, d: LatticeTriangle, u: GasketUnion) -> None:
    if not d.contains_point(w) or not point_in_union(w, u).inside:
        raise WitnessError(f"meet witness {format_point(w)} failed re-verification")


def _check_subset_witness(w: Point, g: GasketPiece, u: GasketUnion) -> None:
    if not point_in_gasket(w, g).inside or not point_in_union(w, u).outside:
        raise WitnessError(f"subset witness {format_point(w)} failed re-verification")


def triangle_meets_union(
    d: LatticeTriangle, u: GasketUnion, depth: int = DEFAULT_DEPTH, verify: bool = True
) -> Decision:
    """Is solid ``d`` disjoint from ``u``?  HOLDS means disjoint; FAILS means
    they meet, with a common point as witness."""
    used = 0
    inconclusive = False
    for piece in u.pieces:
        stack = [(piece.tri, 0)]
        while stack:
            c, lvl = stack.pop()
            used = max(used, lvl)
            if not triangles_intersect(d, c):
                continue
            # d touching the cell boundary means touching the gasket (cell edges
            # and vertices belong to it); otherwise d sits in the open cell
            if not all(c.contains_oblique(x, y, d.n, strict=True) for x, y in d.vertices_oblique()):
                w = _boundary_witness(d, c)
                if verify:
                    _check_meet_witness(w, d, u)
                return Decision(Verdict.FAILS, w, lvl)
            if lvl >= depth:
                inconclusive = True
                continue
            stack.extend((ch, lvl + 1) for ch in reversed(c.children()))
    if inconclusive:
        return Decision(Verdict.INCONCLUSIVE, None, used)
    return Decision(Verdict.HOLDS, None, used)


def piece_subset_union(
    g: GasketPiece | LatticeTriangle,
    u: GasketUnion,
    depth: int = DEFAULT_DEPTH,
    verify: bool = True,
) -> Decision:
    """Is the gasket ``g`` contained in ``u``?  Holds structurally when every
    branch of the subdivision reaches a cell of some piece of ``u``; fails
    with a subdivision vertex of ``g`` that lies outside ``u``."""
    piece = g if isinstance(g, GasketPiece) else GasketPiece(g)
    targets = [q.tri for q in u.pieces]
    level = [piece.tri]
    lvl = 0
    while True:
        nxt = []
        for t in level:
            if any(is_cell(t, r) for r in targets):
                continue
            for x, y in t.vertices_oblique():
                if not lattice_in_union(x, y, t.n, u):
                    w = oblique_point(x, y, t.n)
                    if verify:
                        _check_subset_witness(w, piece, u)
                    return Decision(Verdict.FAILS, w, lvl)
            nxt.extend(t.children())
        if not nxt:
            return Decision(Verdict.HOLDS, None, lvl)
        if lvl >= depth:
            return Decision(Verdict.INCONCLUSIVE, None, lvl)
        level = nxt
        lvl += 1


def union_subset(u1: GasketUnion, u2: GasketUnion, depth: int = DEFAULT_DEPTH) -> Decision:
    used = 0
    inconclusive = False
    for p in u1.pieces:
        dec = piece_subset_union(p, u2, depth)
        used = max(used, dec.depth_used)
        if dec.fails:
            return dec
        inconclusive |= dec.inconclusive
    return Decision(Verdict.INCONCLUSIVE if inconclusive else Verdict.HOLDS, None, used)


def union_equal(u1: GasketUnion, u2: GasketUnion, depth: int = DEFAULT_DEPTH) -> Decision:
    """Mutual containment; the first failing direction's witness is reported."""
    d1 = union_subset(u1, u2, depth)
    if d1.fails:
        return d1
    d2 = union_subset(u2, u1, depth)
    if d2.fails:
        return d2
    used = max(d1.depth_used, d2.depth_used)
    if d1.inconclusive or d2.inconclusive:
        return Decision(Verdict.INCONCLUSIVE, None, used)
    return Decision(Verdict.HOLDS, None, used)


def image_triangle(f: Similitude, t: LatticeTriangle) -> LatticeTriangle:
    return LatticeTriangle.from_oblique_vertices(
        [f.apply_oblique(x, y, t.n) for x, y in t.vertices_oblique()]
    )


def image_of_union(f: Similitude, u: GasketUnion) -> GasketUnion:
    """``f(u)``; by the gasket's dihedral symmetry the image of a piece is
    the piece on the image triangle."""
    return GasketUnion(image_triangle(f, p.tri) for p in u.pieces)


def union_of(unions: Iterable[GasketUnion]) -> GasketUnion:
    return GasketUnion(p for u in unions for p in u.pieces)


# -- distances -------------------------------------------------------------

def _closest_on_segment(p: Point, a: Point, b: Point) -> Point:
    ab = b - a
    t = (p - a).dot(ab) / ab.dot(ab)
    if surd_sign(t) <= 0:
        return a
    if surd_sign(t - 1) >= 0:
        return b
    return a + ab.scale(t)


def _edges(vs: Sequence[Point]):
    return [(vs[i], vs[(i + 1) % 3]) for i in range(3)]


def triangle_distance_sq(d: LatticeTriangle, t: LatticeTriangle) -> tuple[Surd, list[Point]]:
    """Squared distance between disjoint solid triangles and the minimizing
    points on ``t``'s side."""
    dv, tv = d.vertices(), t.vertices()
    best: Surd | None = None
    minimizers: list[Point] = []

    def offer(dist: Surd, on_t: Point) -> None:
        nonlocal best, minimizers
        if best is None or dist < best:
            best, minimizers = dist, [on_t]
        elif dist == best and on_t not in minimizers:
            minimizers.append(on_t)

    for p in dv:
        for a, b in _edges(tv):
            q = _closest_on_segment(p, a, b)
            offer(sqdist(p, q), q)
    for p in tv:
        for a, b in _edges(dv):
            q = _closest_on_segment(p, a, b)
            offer(sqdist(p, q), p)
    assert best is not None
    return best, minimizers


def distance_to_union(
    d: LatticeTriangle, u: GasketUnion, removed: Iterable[Point] = ()
) -> Surd:
    """Exact squared distance from solid ``d`` to ``u``, where the minimizer
    must not be one of the ``removed`` points."""
    removed = list(removed)
    for p in u.pieces:
        if triangles_intersect(d, p.tri):
            raise ValueError(f"triangle {d} is not separated from piece {p.tri}")
    best: Surd | None = None
    minimizers: list[Point] = []
    for p in u.pieces:
        dist, mins = triangle_distance_sq(d, p.tri)
        if best is None or dist < best:
            best, minimizers = dist, list(mins)
        elif dist == best:
            minimizers.extend(m for m in mins if m not in minimizers)
    if best is None:
        raise ValueError("distance to an empty union")
    for m in minimizers:
        if m in removed:
            raise ValueError(f"minimizer {format_point(m)} is a removed point; infimum is ambiguous")
    return best


def closure_minus_triangle(
    u: GasketUnion, tri: LatticeTriangle, depth: int = DEFAULT_DEPTH
) -> tuple[GasketUnion, list[Point]]:
    """Closure of ``u - tri`` as a union, plus the single-point contacts that
    the closure adds back (they are not in ``u - tri`` itself)."""
    keep: list[LatticeTriangle] = []
    removed: list[Point] = []
    stack = [(p.tri, 0) for p in reversed(u.pieces)]
    while stack:
        t, lvl = stack.pop()
        if not triangles_intersect(t, tri):
            keep.append(t)
        elif triangle_in_triangle(t, tri):
            continue
        elif not interiors_meet(t, tri):
            contact = {
                v for v in t.vertices() if tri.contains_point(v)
            } | {v for v in tri.vertices() if t.contains_point(v)}
            if len(contact) != 1:
                raise ValueError(f"piece {t} touches {tri} along a segment")
            keep.append(t)
            removed.extend(c for c in contact if c not in removed)
        else:
            if lvl >= depth:
                raise ValueError("depth budget exhausted while cutting the union")
            stack.extend((c, lvl + 1) for c in reversed(t.children()))
    return GasketUnion(keep), sorted(removed, key=lambda p: (p.x.a, p.x.b, p.y.a, p.y.b))


def diameter_sq(u: GasketUnion) -> Surd:
    """Squared diameter (attained at bounding-triangle vertices)."""
    vs = [v for p in u.pieces for v in p.tri.vertices()]
    best = Surd(0)
    for i, p in enumerate(vs):
        for q in vs[i + 1:]:
            dd = sqdist(p, q)
            if dd > best:
                best = dd
    return best
