"""Exact models of the gasket family.

Geometry is kept on the triangular lattice.  A :class:`LatticeTriangle` is
stored as the oblique integer coordinates of its leftmost vertex on the
``2^-n`` grid plus its orientation, so every triangle predicate reduces to
integer comparisons on the three lattice forms ``A``, ``B`` and ``A + B``.

Membership in a gasket is decided by descending through the cell
subdivision.  There are two independent routes:

* :func:`lattice_in_piece` works on integer lattice points and always
  terminates (the scale drops by one per step);
* :func:`point_in_gasket` works on arbitrary :class:`Point` values in
  Q(sqrt3) and stops on a repeated descent state, which makes it a decision
  procedure for every point with rational triangular coordinates.

The second route is the one used to re-check witnesses.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Sequence

from .surd import (
    Point,
    Surd,
    TriPoint,
    oblique_of,
    parse_tripoint,
    point_of_oblique,
    surd_sign,
)

UP, DOWN = "up", "down"


class LatticeTriangle(NamedTuple):
    """Solid equilateral triangle of side ``2^-n`` on the triangular lattice.

    ``(a, b)`` are the oblique coordinates of the leftmost vertex at scale
    ``n``.  Up triangles have vertices ``(a,b), (a+1,b), (a,b+1)``; down
    triangles ``(a,b), (a+1,b), (a+1,b-1)``.
    """

    a: int
    b: int
    n: int
    up: bool = True

    @classmethod
    def at(cls, anchor: TriPoint, n: int, orient: str = UP) -> "LatticeTriangle":
        a, b = anchor.oblique_at(n)
        if orient not in (UP, DOWN):
            raise ValueError(f"orientation must be 'up' or 'down', not {orient!r}")
        return cls(a, b, n, orient == UP)

    @classmethod
    def from_oblique_vertices(
        cls, verts: Sequence[tuple[int, int, int]]
    ) -> "LatticeTriangle":
        """Triangle through three oblique lattice points ``(a, b, k)``."""
        k = max(v[2] for v in verts)
        pts = sorted(((a << (k - kk), b << (k - kk)) for a, b, kk in verts))
        (a0, b0), (a1, b1), (a2, b2) = pts
        side = a2 - a0
        if side <= 0:
            raise ValueError("vertices do not form a lattice triangle")
        if (a1, b1) == (a0, b0 + side) and (a2, b2) == (a0 + side, b0):
            up = True
        elif (a1, b1) == (a0 + side, b0 - side) and (a2, b2) == (a0 + side, b0):
            up = False
        else:
            raise ValueError("vertices do not form a lattice triangle")
        e = side.bit_length() - 1
        if side != 1 << e:
            raise ValueError("side is not a power of two")
        n = k - e
        if a0 % side or b0 % side:
            raise ValueError("anchor is off the triangle's own grid")
        return cls(a0 >> e, b0 >> e, n, up)

    @classmethod
    def from_points(cls, pts: Sequence[Point]) -> "LatticeTriangle":
        verts = []
        for p in pts:
            t = TriPoint.from_point(p)
            if t is None:
                raise ValueError(f"{p} is not a lattice point")
            verts.append(t.oblique())
        return cls.from_oblique_vertices(verts)

    # -- derived data ------------------------------------------------------
    @property
    def anchor(self) -> TriPoint:
        return TriPoint.from_oblique(self.a, self.b, self.n)

    @property
    def side(self) -> Fraction:
        return Fraction(1, 2 ** self.n) if self.n >= 0 else Fraction(2 ** -self.n)

    @property
    def orient(self) -> str:
        return UP if self.up else DOWN

    def vertices_oblique(self) -> tuple[tuple[int, int], ...]:
        a, b = self.a, self.b
        if self.up:
            return (a, b), (a + 1, b), (a, b + 1)
        return (a, b), (a + 1, b), (a + 1, b - 1)

    def vertices(self) -> tuple[Point, Point, Point]:
        return tuple(  # type: ignore[return-value]
            TriPoint.from_oblique(x, y, self.n).to_point() for x, y in self.vertices_oblique()
        )

    def children(self) -> tuple["LatticeTriangle", ...]:
        """Corner sub-triangles, ordered by address digit (0, 1, 2)."""
        a, b, n = 2 * self.a, 2 * self.b, self.n + 1
        if self.up:
            return (
                LatticeTriangle(a, b, n, True),
                LatticeTriangle(a, b + 1, n, True),
                LatticeTriangle(a + 1, b, n, True),
            )
        return (
            LatticeTriangle(a + 1, b, n, False),
            LatticeTriangle(a + 1, b - 1, n, False),
            LatticeTriangle(a, b, n, False),
        )

    def bounds(self, k: int) -> tuple[int, int, int, int, int, int]:
        """Closed intervals of the forms A, B, A+B over the triangle, as
        integers at scale ``k >= n``."""
        sh = k - self.n
        s = 1 << sh
        a, b = self.a << sh, self.b << sh
        if self.up:
            return a, a + s, b, b + s, a + b, a + b + s
        return a, a + s, b - s, b, a + b, a + b + s

    def contains_oblique(self, p: int, q: int, k: int, strict: bool = False) -> bool:
        kk = max(k, self.n)
        if kk > k:
            p, q = p << (kk - k), q << (kk - k)
        sh = kk - self.n
        s = 1 << sh
        a, b = self.a << sh, self.b << sh
        if self.up:
            if strict:
                return p > a and q > b and p + q < a + b + s
            return p >= a and q >= b and p + q <= a + b + s
        if strict:
            return p < a + s and q < b and p + q > a + b
        return p <= a + s and q <= b and p + q >= a + b

    def contains_point(self, p: Point) -> bool:
        """Closed-triangle membership for a general point (exact)."""
        pa, pb = oblique_of(p)
        s = self.side
        a, b = self.a * s, self.b * s
        if self.up:
            return (
                surd_sign(pa - a) >= 0
                and surd_sign(pb - b) >= 0
                and surd_sign(a + b + s - pa - pb) >= 0
            )
        return (
            surd_sign(a + s - pa) >= 0
            and surd_sign(b - pb) >= 0
            and surd_sign(pa + pb - a - b) >= 0
        )

    def local(self, p: int, q: int, k: int) -> tuple[int, int, int]:
        """Coordinates of an oblique point in the frame where this triangle is
        the unit up triangle ``x, y >= 0, x + y <= 1``; returned as integers
        ``(x, y)`` over ``2^d``."""
        kk = max(k, self.n)
        if kk > k:
            p, q = p << (kk - k), q << (kk - k)
        d = kk - self.n
        a, b = self.a << d, self.b << d
        if self.up:
            return p - a, q - b, d
        return a + (1 << d) - p, b - q, d

    def __str__(self) -> str:
        return f"{self.orient} {self.anchor} {self.n}"


class GasketPiece(NamedTuple):
    """The full Sierpinski gasket built on ``tri``."""

    tri: LatticeTriangle

    def children(self) -> tuple["GasketPiece", ...]:
        return tuple(GasketPiece(c) for c in self.tri.children())


@dataclass(frozen=True)
class CellAddress:
    word: str
    root: LatticeTriangle

    def triangle(self) -> LatticeTriangle:
        t = self.root
        for ch in self.word:
            t = t.children()[int(ch)]
        return t


def cell_address(tri: LatticeTriangle, root: LatticeTriangle) -> CellAddress | None:
    """Address of ``tri`` as a cell of the gasket on ``root``, or None."""
    d = tri.n - root.n
    if d < 0:
        return None
    local = sorted(root.local(x, y, tri.n)[:2] for x, y in tri.vertices_oblique())
    (x0, y0), (x1, y1), (x2, y2) = local
    if (x1, y1) != (x0, y0 + 1) or (x2, y2) != (x0 + 1, y0):
        return None  # orientation differs from the root's
    if x0 < 0 or y0 < 0 or x0 + y0 >= 1 << d or x0 & y0:
        return None
    word = []
    for i in range(d - 1, -1, -1):
        bx, by = (x0 >> i) & 1, (y0 >> i) & 1
        word.append("1" if by else "2" if bx else "0")
    return CellAddress("".join(word), root)


def is_cell(tri: LatticeTriangle, root: LatticeTriangle) -> bool:
    return cell_address(tri, root) is not None


def _piece_key(p: GasketPiece) -> tuple:
    t = p.tri
    return (t.n, not t.up, t.a, t.b)


class GasketUnion:
    """Finite union of gasket pieces in canonical order; pieces that are
    cells of another member are absorbed."""

    __slots__ = ("pieces",)

    def __init__(self, pieces: Iterable[GasketPiece | LatticeTriangle]) -> None:
        ps = {p if isinstance(p, GasketPiece) else GasketPiece(p) for p in pieces}
        keep = [
            p for p in ps
            if not any(q != p and is_cell(p.tri, q.tri) for q in ps)
        ]
        self.pieces: tuple[GasketPiece, ...] = tuple(sorted(keep, key=_piece_key))

    def __iter__(self) -> Iterator[GasketPiece]:
        return iter(self.pieces)

    def __len__(self) -> int:
        return len(self.pieces)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GasketUnion) and self.pieces == other.pieces

    def __hash__(self) -> int:
        return hash(self.pieces)

    def __repr__(self) -> str:
        return f"GasketUnion({[str(p.tri) for p in self.pieces]})"


def build_E(n: int = 5) -> GasketUnion:
    """``n`` unit gaskets in a row; ``build_E(5)`` is the five-gasket set."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return GasketUnion(LatticeTriangle(k, 0, 0, True) for k in range(n))


# the gasket dilated by 8; A_n and B_n are its level-(n+3) data
C_ROOT = LatticeTriangle(0, 0, -3, True)


def build_C() -> GasketUnion:
    return GasketUnion([C_ROOT])


def _cell_exists(a: int, b: int, n: int) -> bool:
    """Is ``(a, b)`` (oblique, scale n) the anchor of a cell of A_n?"""
    return a >= 0 and b >= 0 and a + b < 1 << (n + 3) and not a & b


def cells(n: int) -> list[LatticeTriangle]:
    """The ``3^(n+3)`` cells of A_n by address descent from C."""
    if n < -3:
        raise ValueError("A_n is defined for n >= -3")
    level = [C_ROOT]
    for _ in range(n + 3):
        level = [c for t in level for c in t.children()]
    return level


def is_cell_of(tri: LatticeTriangle, n: int) -> bool:
    return tri.n == n and is_cell(tri, C_ROOT)


def vertices_oblique_B(n: int) -> set[tuple[int, int]]:
    """Vertices of A_n as oblique integers at scale n."""
    out: set[tuple[int, int]] = set()
    for c in cells(n):
        out.update(c.vertices_oblique())
    return out


def vertices_B(n: int) -> set[TriPoint]:
    return {TriPoint.from_oblique(a, b, n) for a, b in vertices_oblique_B(n)}


def is_vertex_B(p: Point | TriPoint, n: int) -> bool:
    t = p if isinstance(p, TriPoint) else TriPoint.from_point(p)
    if t is None:
        return False
    try:
        a, b = t.oblique_at(n)
    except ValueError:
        return False
    return _cell_exists(a, b, n) or _cell_exists(a - 1, b, n) or _cell_exists(a, b - 1, n)


# -- membership ------------------------------------------------------------

class Status(enum.Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"
    INCONCLUSIVE = "inconclusive"


class Membership(NamedTuple):
    status: Status
    depth: int

    @property
    def inside(self) -> bool:
        return self.status is Status.INSIDE

    @property
    def outside(self) -> bool:
        return self.status is Status.OUTSIDE


DEFAULT_STATE_BUDGET = 20_000


def lattice_in_piece(p: int, q: int, k: int, tri: LatticeTriangle) -> bool:
    """Membership of the oblique lattice point ``(p, q) / 2^k`` in the gasket
    on ``tri``.  Always decisive."""
    x, y, d = tri.local(p, q, k)
    while True:
        full = 1 << d
        if x < 0 or y < 0 or x + y > full:
            return False
        if x == 0 or y == 0 or x + y == full:
            return True
        half = full >> 1
        if x + y <= half:
            pass
        elif x >= half:
            x -= half
        elif y >= half:
            y -= half
        else:
            return False
        d -= 1


def lattice_in_union(p: int, q: int, k: int, u: GasketUnion) -> bool:
    return any(lattice_in_piece(p, q, k, g.tri) for g in u.pieces)


def _local(pa, pb, tri: LatticeTriangle):
    scale = Fraction(2 ** tri.n) if tri.n >= 0 else Fraction(1, 2 ** -tri.n)
    x, y = pa * scale - tri.a, pb * scale - tri.b
    if tri.up:
        return x, y
    return 1 - x, -y


def _oblique(p: Point):
    pa, pb = oblique_of(p)
    if pa.is_rational() and pb.is_rational():
        # rational triangular coordinates: run on plain fractions, which is
        # far cheaper than Surd arithmetic
        return pa.a, pb.a, _fsign
    return pa, pb, surd_sign


def point_in_gasket(
    p: Point, g: GasketPiece | LatticeTriangle, budget: int = DEFAULT_STATE_BUDGET
) -> Membership:
    """Exact membership of a general point, by cell descent with cycle
    detection on the rescaled relative position."""
    tri = g.tri if isinstance(g, GasketPiece) else g
    pa, pb, sign = _oblique(p)
    return _descend(*_local(pa, pb, tri), sign, budget)


def _fsign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _descend(x, y, sign, budget: int) -> Membership:
    half = Fraction(1, 2)
    seen: set = set()
    depth = 0
    while depth < budget:
        sx, sy, sxy = sign(x), sign(y), sign(1 - x - y)
        if sx < 0 or sy < 0 or sxy < 0:
            return Membership(Status.OUTSIDE, depth)
        if sx == 0 or sy == 0 or sxy == 0:
            return Membership(Status.INSIDE, depth)
        state = (x, y)
        if state in seen:
            return Membership(Status.INSIDE, depth)
        seen.add(state)
        if sign(x + y - half) <= 0:
            x, y = x * 2, y * 2
        elif sign(x - half) >= 0:
            x, y = x * 2 - 1, y * 2
        elif sign(y - half) >= 0:
            x, y = x * 2, y * 2 - 1
        else:
            return Membership(Status.OUTSIDE, depth)
        depth += 1
    return Membership(Status.INCONCLUSIVE, depth)


def point_in_union(
    p: Point, u: GasketUnion, budget: int = DEFAULT_STATE_BUDGET
) -> Membership:
    depth = 0
    inconclusive = False
    pa, pb, sign = _oblique(p)
    for g in u.pieces:
        m = _descend(*_local(pa, pb, g.tri), sign, budget)
        depth = max(depth, m.depth)
        if m.status is Status.INSIDE:
            return Membership(Status.INSIDE, m.depth)
        if m.status is Status.INCONCLUSIVE:
            inconclusive = True
    return Membership(Status.INCONCLUSIVE if inconclusive else Status.OUTSIDE, depth)


# -- scene text format -----------------------------------------------------

_PIECE_LINE = re.compile(r"piece\s+(up|down)\s+(\(.*\))\s+(-?\d+)")


def union_to_text(u: GasketUnion) -> str:
    return "".join(f"piece {p.tri}\n" for p in u.pieces)


def union_from_text(text: str) -> GasketUnion:
    pieces = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        m = _PIECE_LINE.fullmatch(line)
        if not m:
            raise ValueError(f"line {lineno}: expected 'piece <orient> <anchor> <side-exp>'")
        pieces.append(LatticeTriangle.at(parse_tripoint(m.group(2)), int(m.group(3)), m.group(1)))
    return GasketUnion(pieces)


def oblique_point(p: int, q: int, k: int) -> Point:
    d = Fraction(1, 2 ** k) if k >= 0 else Fraction(2 ** -k)
    return point_of_oblique(p * d, q * d)
