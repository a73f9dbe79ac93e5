"""Self-similarity search for n gaskets in a row.

Placements are similitude images of the row at scales ``2^-1 .. 2^-max_e``
whose image lies inside the row.  A decomposition is a cover of the row's
finest cells by placements: exact covers are searched first, overlapping
ones second.  Any cover found is re-verified with :func:`union_equal`, which
is what makes it a certificate.
"""
from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    DEFAULT_DEPTH,
    Decision,
    image_of_union,
    image_triangle,
    piece_subset_union,
    union_equal,
    union_of,
)
from .model import LatticeTriangle, build_E
from .similitude import IFS, Similitude
from .surd import TriPoint

UNIT = LatticeTriangle(0, 0, 0, True)


def cell_symmetries(cell: LatticeTriangle, e: int) -> list[Similitude]:
    """The six maps of scale ``2^-e`` taking the unit triangle onto ``cell``."""
    out = []
    zero = TriPoint(0, 0, 0)
    for refl in (False, True):
        for rot in range(6):
            lin = Similitude(rot, refl, e, zero)
            img = image_triangle(lin, UNIT)
            if img.up != cell.up:
                continue
            k = cell.n
            t = TriPoint.from_oblique(cell.a - img.a, cell.b - img.b, k)
            out.append(Similitude(rot, refl, e, t))
    return out


def _descendants(t: LatticeTriangle, n: int) -> list[LatticeTriangle]:
    level = [t]
    while level and level[0].n < n:
        level = [c for x in level for c in x.children()]
    return level


@dataclass
class Placement:
    map: Similitude
    cells: frozenset


def placements(n: int, max_e: int, depth: int = DEFAULT_DEPTH) -> list[Placement]:
    row = build_E(n)
    out: list[Placement] = []
    seen: set[frozenset] = set()
    for e in range(1, max_e + 1):
        targets = [c for p in row.pieces for c in _descendants(p.tri, e)]
        for cell in sorted(targets):
            for f in cell_symmetries(cell, e):
                img = image_of_union(f, row)
                if not all(piece_subset_union(p, row, depth, verify=False).holds for p in img.pieces):
                    continue
                cover = frozenset(
                    d for p in img.pieces for d in _descendants(p.tri, max_e)
                )
                if cover in seen:
                    continue
                seen.add(cover)
                out.append(Placement(f, cover))
    return out


def _exact_cover(universe: list, rows: dict[int, frozenset]):
    cols: dict = {x: set() for x in universe}
    for rid, items in rows.items():
        for x in items:
            cols[x].add(rid)

    def select(r: int) -> list[set]:
        removed = []
        for j in rows[r]:
            for i in cols[j]:
                for k in rows[i]:
                    if k != j:
                        cols[k].remove(i)
            removed.append(cols.pop(j))
        return removed

    def deselect(r: int, removed: list[set]) -> None:
        for j in reversed(list(rows[r])):
            cols[j] = removed.pop()
            for i in cols[j]:
                for k in rows[i]:
                    if k != j:
                        cols[k].add(i)

    solution: list[int] = []

    def solve():
        if not cols:
            yield list(solution)
            return
        c = min(cols, key=lambda x: (len(cols[x]), x))
        for r in sorted(cols[c]):
            solution.append(r)
            removed = select(r)
            yield from solve()
            deselect(r, removed)
            solution.pop()

    return solve()


def _overlapping_cover(universe: list, rows: dict[int, frozenset]):
    options: dict = {x: [] for x in universe}
    for rid in sorted(rows):
        for x in rows[rid]:
            options[x].append(rid)
    full = len(universe)

    def solve(covered: frozenset, chosen: list[int]):
        if len(covered) == full:
            yield list(chosen)
            return
        target = min(
            (x for x in universe if x not in covered), key=lambda x: (len(options[x]), x)
        )
        for r in options[target]:
            chosen.append(r)
            yield from solve(covered | rows[r], chosen)
            chosen.pop()

    return solve(frozenset(), [])


@dataclass
class SearchResult:
    ifs: IFS | None
    method: str  # "exact-cover", "overlapping-cover" or "none"
    placements: int


def search_ifs(n: int, max_e: int, depth: int = DEFAULT_DEPTH) -> SearchResult:
    """Bounded search for a decomposition of the n-row into contractive copies
    of itself with scales ``2^-1 .. 2^-max_e``.

    Exact covers of the finest cells are tried first; if none exists the
    search allows copies to overlap (four gaskets in a row needs this)."""
    row = build_E(n)
    universe = sorted(d for p in row.pieces for d in _descendants(p.tri, max_e))
    pl = placements(n, max_e, depth)
    rows = {i: p.cells for i, p in enumerate(pl)}
    for sol in _exact_cover(universe, rows):
        return SearchResult(IFS(tuple(pl[i].map for i in sorted(sol))), "exact-cover", len(pl))
    for sol in _overlapping_cover(universe, rows):
        return SearchResult(
            IFS(tuple(pl[i].map for i in sorted(sol))), "overlapping-cover", len(pl)
        )
    return SearchResult(None, "none", len(pl))


def find_ifs(n: int, max_e: int, depth: int = DEFAULT_DEPTH) -> IFS | None:
    """Shortcut for :func:`search_ifs` returning only the IFS (or None)."""
    return search_ifs(n, max_e, depth).ifs


def verify_attractor(F: IFS, n: int, depth: int = DEFAULT_DEPTH) -> Decision:
    """Exact check that the n-row equals the union of its images under F."""
    row = build_E(n)
    return union_equal(union_of(image_of_union(f, row) for f in F), row, depth)
