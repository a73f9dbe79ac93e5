"""Machine-checked pipeline for "five gaskets in a row are not self-similar".

The pipeline derives the marked geometry, checks the exact constants of the
separation argument, verifies the nesting chain of images of the small
triangle under ``T``, runs the exhaustive base cases (scales 2^-1..2^-6),
checks the arithmetic behind the induction step, runs the positive controls
for one to four gaskets, and assembles everything into a certificate.

Steps that are structural rather than computational are listed in the
certificate under ``trusted_steps``.
"""
from __future__ import annotations

import hashlib
import itertools
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .algebra import (
    DEFAULT_DEPTH,
    Decision,
    closure_minus_triangle,
    diameter_sq,
    distance_to_union,
    image_of_union,
    image_triangle,
    piece_subset_union,
    triangle_in_triangle,
    triangle_meets_union,
    triangles_intersect,
    union_of,
)
from .ifs import search_ifs, verify_attractor
from .model import (
    GasketPiece,
    GasketUnion,
    LatticeTriangle,
    build_E,
    is_cell_of,
    vertices_oblique_B,
)
from .similitude import F1, F2, F3, IFS, T, Similitude, linear_oblique
from .surd import (
    Point,
    Surd,
    TriPoint,
    cross,
    format_point,
    format_surd,
    lattice_point,
    surd_sign,
)

log = logging.getLogger(__name__)

SCHEMA = "gasket-cert/1"
BASE_RANGE = range(1, 7)
CHAIN_LENGTH = 8
MONOTONE_EXTRA = 3


class GeometryError(RuntimeError):
    def __init__(self, checks: list["Check"]) -> None:
        failed = [c.name for c in checks if not c.holds]
        super().__init__(f"geometry constraints failed: {', '.join(failed)}")
        self.checks = checks


@dataclass(frozen=True)
class Check:
    name: str
    holds: bool
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "holds": self.holds, **self.detail}


@dataclass(frozen=True)
class StatedConstants:
    """The numeric claims the argument rests on, as stated."""

    diam_sq: Surd = Surd(25)                    # diam(E) = 5
    gap_sq: Surd = Surd(Fraction(3, 256))       # distance sqrt3/16
    k_bound: Fraction = Fraction(1, 80)         # scale bound for the separation step
    diam_bound: Fraction = Fraction(1, 16)      # 5/80
    step_exponent: int = 7                      # first scale 2^-m handled by induction


# -- geometry ----------------------------------------------------------------

def _in_closed_triangle(p: Point, a: Point, b: Point, c: Point) -> bool:
    o = surd_sign(cross(a, b, c))
    if o == 0:
        return False
    return all(
        surd_sign(cross(u, v, p)) * o >= 0 for u, v in ((a, b), (b, c), (c, a))
    )


def _descendants(t: LatticeTriangle, depth: int) -> list[LatticeTriangle]:
    level = [t]
    for _ in range(depth):
        level = [c for x in level for c in x.children()]
    return level


@dataclass
class GeometryMarks:
    points: dict[str, Point]
    tri_123: LatticeTriangle | None
    tri_145: LatticeTriangle | None
    tri_678: LatticeTriangle | None
    const_diam_sq: Surd
    const_gap_sq: Surd | None
    closure: GasketUnion | None
    removed: list[Point]
    family: list[dict]
    checks: list[Check]
    const_k_bound: Fraction = Fraction(1, 80)
    const_diam_bound: Fraction = Fraction(1, 16)

    @property
    def ok(self) -> bool:
        return all(c.holds for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "points": {k: format_point(v) for k, v in sorted(self.points.items())},
            "tri_123": None if self.tri_123 is None else str(self.tri_123),
            "tri_145": None if self.tri_145 is None else str(self.tri_145),
            "tri_678": None if self.tri_678 is None else str(self.tri_678),
            "diam_sq": format_surd(self.const_diam_sq),
            "gap_sq": None if self.const_gap_sq is None else format_surd(self.const_gap_sq),
            "removed_touch_points": [format_point(p) for p in self.removed],
            "closure_of_E_minus_tri_145": [str(p.tri) for p in self.closure or ()],
            "search_family": self.family,
            "labeling_note": (
                "P6, P7, P8 are the left base vertex, right base vertex and apex of the "
                "selected cell; the constraints fix the triple, not its order, and no "
                "set-level claim depends on the order"
            ),
            "constraints": [c.to_dict() for c in self.checks],
        }


def _search_marked_cell(E: GasketUnion, closure: GasketUnion, removed: list[Point],
                        max_depth: int = 4) -> tuple[LatticeTriangle | None, list[dict]]:
    """T-invariant cells of E (side 2^-j, j <= max_depth) and their distance
    to the closure of E minus the top triangle; the largest separated one is
    selected and must be unique at its size."""
    family = []
    found: list[tuple[LatticeTriangle, Surd]] = []
    for piece in E.pieces:
        for j in range(max_depth + 1):
            for cell in _descendants(piece.tri, j):
                if not triangle_in_triangle(image_triangle(T, cell), cell):
                    continue
                entry = {"cell": str(cell), "gap_sq": None}
                if any(triangles_intersect(cell, p.tri) for p in closure.pieces):
                    entry["gap_sq"] = "touching"
                else:
                    try:
                        g = distance_to_union(cell, closure, removed)
                    except ValueError as exc:
                        entry["gap_sq"] = f"ambiguous: {exc}"
                    else:
                        entry["gap_sq"] = format_surd(g)
                        found.append((cell, g))
                family.append(entry)
    if not found:
        return None, family
    top = min(c.n for c, _ in found)
    best = [c for c, _ in found if c.n == top]
    return (best[0] if len(best) == 1 else None), family


def derive_geometry(overrides: dict[str, Point] | None = None, strict: bool = True) -> GeometryMarks:
    """Derive P1..P8 from the textual constraints and check each one exactly.

    ``overrides`` replaces derived points (negative controls); with
    ``strict`` a failed constraint raises :class:`GeometryError`."""
    E = build_E(5)
    P = {
        "P1": lattice_point(Fraction(1, 2), Fraction(1, 2)),
        "P2": Point.of(0, 0),
        "P3": Point.of(1, 0),
    }
    # T carries the unit triangle onto the top triangle, sharing P1
    P["P4"] = T.apply(P["P1"])
    P["P5"] = T.apply(P["P2"])
    t145 = LatticeTriangle.from_points([P["P1"], P["P4"], P["P5"]])
    closure, removed = closure_minus_triangle(E, t145)
    cell, family = _search_marked_cell(E, closure, removed)
    if cell is not None:
        P["P6"], P["P7"], P["P8"] = cell.vertices()
    for k, v in (overrides or {}).items():
        if k not in {f"P{i}" for i in range(1, 9)}:
            raise KeyError(f"unknown marked point {k!r}")
        P[k] = v

    checks: list[Check] = []

    def tri(*names: str) -> LatticeTriangle | None:
        try:
            return LatticeTriangle.from_points([P[n] for n in names])
        except (KeyError, ValueError):
            return None

    tri_123, tri_145, tri_678 = tri("P1", "P2", "P3"), tri("P1", "P4", "P5"), tri("P6", "P7", "P8")

    images = [T.apply(P[n]) for n in ("P1", "P2", "P3")]
    checks.append(Check(
        "T maps tri P1P2P3 onto tri P1P4P5",
        images == [P["P4"], P["P5"], P["P1"]] and tri_123 is not None and tri_145 is not None,
        {"images": [format_point(q) for q in images]},
    ))

    if all(f"P{i}" in P for i in (6, 7, 8)):
        a, b, c = P["P6"], P["P7"], P["P8"]
        inv = all(_in_closed_triangle(T.apply(v), a, b, c) for v in (a, b, c))
        checks.append(Check("T(tri P6P7P8) inside tri P6P7P8", inv,
                            {"images": [format_point(T.apply(v)) for v in (a, b, c)]}))
    else:
        checks.append(Check("T(tri P6P7P8) inside tri P6P7P8", False, {"error": "no cell found"}))

    gap: Surd | None = None
    cl, rem = closure, removed
    if tri_678 is None or tri_145 is None:
        checks.append(Check("separation gap", False, {"error": "marked triangles are not lattice triangles"}))
    else:
        try:
            cl, rem = closure_minus_triangle(E, tri_145)
            gap = distance_to_union(tri_678, cl, rem)
        except ValueError as exc:
            checks.append(Check("separation gap", False, {"error": str(exc)}))
        else:
            checks.append(Check("separation gap", surd_sign(gap) > 0,
                                {"gap_sq": format_surd(gap),
                                 "removed": [format_point(q) for q in rem]}))

    if tri_678 is None:
        checks.append(Check("tri P6P7P8 meets E", False, {"error": "not a lattice triangle"}))
    else:
        dec = triangle_meets_union(tri_678, E)
        checks.append(Check("tri P6P7P8 meets E", dec.fails, {"decision": dec.to_dict()}))

    marks = GeometryMarks(
        points=P, tri_123=tri_123, tri_145=tri_145, tri_678=tri_678,
        const_diam_sq=diameter_sq(E), const_gap_sq=gap, closure=cl, removed=rem,
        family=family, checks=checks,
    )
    if strict and not marks.ok:
        raise GeometryError(checks)
    return marks


def check_constants(marks: GeometryMarks, stated: StatedConstants = StatedConstants()) -> list[Check]:
    out = [
        Check("diam(E)^2 equals stated", marks.const_diam_sq == stated.diam_sq,
              {"computed": format_surd(marks.const_diam_sq), "stated": format_surd(stated.diam_sq)}),
        Check("k_bound * diam(E) equals diam_bound",
              stated.diam_sq * stated.k_bound ** 2 == Surd(stated.diam_bound ** 2),
              {"lhs_sq": format_surd(stated.diam_sq * stated.k_bound ** 2),
               "rhs_sq": str(stated.diam_bound ** 2)}),
        Check("gap^2 equals stated",
              marks.const_gap_sq is not None and marks.const_gap_sq == stated.gap_sq,
              {"computed": None if marks.const_gap_sq is None else format_surd(marks.const_gap_sq),
               "stated": format_surd(stated.gap_sq)}),
        Check("diam_bound^2 < gap^2", Surd(stated.diam_bound ** 2) < stated.gap_sq,
              {"lhs": str(stated.diam_bound ** 2), "rhs": format_surd(stated.gap_sq)}),
    ]
    pinned = [f["cell"] for f in marks.family if f["gap_sq"] == format_surd(stated.gap_sq)]
    out.append(Check(
        "stated gap pins tri P6P7P8 within search family",
        marks.tri_678 is not None and pinned == [str(marks.tri_678)],
        {"matching_cells": pinned, "family_size": len(marks.family)},
    ))
    out.extend(induction_arithmetic(stated)[1:])
    return out


def induction_arithmetic(stated: StatedConstants = StatedConstants()) -> list[Check]:
    s = stated.step_exponent
    step, prev = Fraction(1, 2 ** s), Fraction(1, 2 ** (s - 1))
    return [
        Check("2^-(M+1) <= 2^-step for M >= step-1", Fraction(1, 2 ** s) <= step,
              {"M": s - 1, "lhs": str(Fraction(1, 2 ** s)), "rhs": str(step)}),
        Check("2^-step <= k_bound", step <= stated.k_bound,
              {"lhs": str(step), "rhs": str(stated.k_bound)}),
        Check("2^-(step-1) > k_bound", prev > stated.k_bound,
              {"lhs": str(prev), "rhs": str(stated.k_bound),
               "base_case_range": f"m = 1..{s - 1}"}),
    ]


def nesting_chain(tri_678: LatticeTriangle, length: int = CHAIN_LENGTH,
                  depth: int = DEFAULT_DEPTH) -> list[dict]:
    """T^(k+1)(tri) inside T^k(tri) for k = 0..length, both for the solid
    triangle and for the gasket piece on it."""
    out = []
    cur = tri_678
    for k in range(length + 1):
        nxt = image_triangle(T, cur)
        dec = piece_subset_union(nxt, GasketUnion([cur]), depth)
        out.append({
            "k": k,
            "outer": str(cur),
            "inner": str(nxt),
            "triangle_nested": triangle_in_triangle(nxt, cur),
            "piece_nested": dec.to_dict(),
        })
        cur = nxt
    return out


# -- base cases --------------------------------------------------------------

_UNIT_E1, _UNIT_E2 = (1, 0), (0, 1)
_ASSIGN: dict[tuple[tuple[int, int], tuple[int, int]], tuple[int, bool]] = {}
for _refl in (False, True):
    for _rot in range(6):
        _ASSIGN[(linear_oblique(_rot, _refl, *_UNIT_E1),
                 linear_oblique(_rot, _refl, *_UNIT_E2))] = (_rot, _refl)


def lattice_triangles_on(points: set[tuple[int, int]]) -> list[LatticeTriangle]:
    """Up and down unit triangles (at the points' scale) with all three
    vertices in ``points``; the scale is attached by the caller."""
    out = []
    for a, b in sorted(points):
        if (a + 1, b) not in points:
            continue
        if (a, b + 1) in points:
            out.append((a, b, True))
        if (a + 1, b - 1) in points:
            out.append((a, b, False))
    return out  # type: ignore[return-value]


def enumerate_candidates(m: int) -> list[Similitude]:
    """Every scale-2^-m similitude sending (P1, P2, P3) to the vertices of a
    side-2^-m triangle with corners in B_m, in any order and for either
    orientation; canonical order, no duplicates."""
    if m < 1:
        raise ValueError("m must be positive")
    pts = vertices_oblique_B(m)
    out: list[Similitude] = []
    seen: set[Similitude] = set()
    for a, b, up in lattice_triangles_on(pts):
        verts = LatticeTriangle(a, b, m, up).vertices_oblique()
        # images of P1 (apex e2), P2 (origin), P3 (e1)
        for d1, d2, d3 in itertools.permutations(verts):
            key = ((d3[0] - d2[0], d3[1] - d2[1]), (d1[0] - d2[0], d1[1] - d2[1]))
            rot, refl = _ASSIGN[key]  # every equilateral lattice triple is in class
            f = Similitude(rot, refl, m, TriPoint.from_oblique(d2[0], d2[1], m))
            if f not in seen:
                seen.add(f)
                out.append(f)
    return out


def recount_candidates(m: int) -> dict:
    """Independent count: scan horizontal B_m edges and look for an apex
    above (up triangle) or below (down triangle); six maps per triangle."""
    pts = vertices_oblique_B(m)
    up = down = 0
    for a, b in pts:
        if (a + 1, b) in pts:
            up += (a, b + 1) in pts
            down += (a + 1, b - 1) in pts
    return {"up": up, "down": down, "assignments": 6, "total": 6 * (up + down)}


@dataclass
class CandidateResult:
    map: Similitude
    admissible: bool
    rejection: Decision | None = None
    disjoint: Decision | None = None
    monotone: tuple[Decision, ...] = ()
    cell_image: bool = False

    @property
    def inconclusive(self) -> bool:
        return any(d is not None and d.inconclusive
                   for d in (self.rejection, self.disjoint, *self.monotone))

    def digest_line(self) -> str:
        parts = [str(self.map)]
        if self.admissible:
            parts.append("admissible")
            parts.append(_dec_text(self.disjoint))
            parts.extend(_dec_text(d) for d in self.monotone)
        else:
            parts.append("rejected")
            parts.append(_dec_text(self.rejection))
        return "\t".join(parts)


def _dec_text(d: Decision | None) -> str:
    if d is None:
        return "-"
    w = "" if d.witness is None else " " + format_point(d.witness)
    return f"{d.verdict.value}@{d.depth_used}{w}"


def check_candidate(f: Similitude, m: int, tri_678: LatticeTriangle,
                    depth: int = DEFAULT_DEPTH, E: GasketUnion | None = None) -> CandidateResult:
    E = E or build_E(5)
    images = [image_triangle(f, p.tri) for p in E.pieces]
    for img in images:
        dec = piece_subset_union(img, E, depth)
        if not dec.holds:
            return CandidateResult(f, False, rejection=dec)
    fE = GasketUnion(images)
    cur = T.power(m)
    disjoint = triangle_meets_union(image_triangle(cur, tri_678), fE, depth)
    mono = []
    for _ in range(MONOTONE_EXTRA):
        cur = T.compose(cur)
        mono.append(triangle_meets_union(image_triangle(cur, tri_678), fE, depth))
    cell = is_cell_of(images[0], m) and images[0].up
    return CandidateResult(f, True, None, disjoint, tuple(mono), cell)


def _check_chunk(args) -> list[CandidateResult]:
    maps, m, tri_678, depth = args
    E = build_E(5)
    return [check_candidate(f, m, tri_678, depth, E) for f in maps]


@dataclass
class BaseCaseRecord:
    m: int
    candidate_count: int
    recount: dict
    admissible: list[CandidateResult]
    rejected_count: int
    violations: list[str]
    inconclusive: int
    digest: str
    runtime: float

    @property
    def admissible_count(self) -> int:
        return len(self.admissible)

    @property
    def ok(self) -> bool:
        return (not self.violations and self.inconclusive == 0
                and self.candidate_count == self.recount["total"])

    def to_dict(self, with_timing: bool = False) -> dict:
        d = {
            "m": self.m,
            "candidate_count": self.candidate_count,
            "independent_recount": self.recount,
            "admissible_count": self.admissible_count,
            "rejected_count": self.rejected_count,
            "violations": self.violations,
            "inconclusive": self.inconclusive,
            "admissible_scale_and_vertices_in_B_m": self.admissible_count,
            "admissible_image_is_up_cell_of_A_m": sum(r.cell_image for r in self.admissible),
            "monotone_checked_k": f"{self.m}..{self.m + MONOTONE_EXTRA}",
            "decisions_digest": self.digest,
        }
        if with_timing:
            d["runtime_seconds"] = round(self.runtime, 3)
        return d


def verify_base_case(m: int, tri_678: LatticeTriangle | None = None,
                     depth: int = DEFAULT_DEPTH, workers: int = 1,
                     chunk: int = 2000) -> BaseCaseRecord:
    """Check every candidate of scale 2^-m: admissible ones (image of E
    inside E) must keep E's image away from T^m(tri P6P7P8)."""
    if tri_678 is None:
        tri_678 = derive_geometry().tri_678
    assert tri_678 is not None
    start = time.perf_counter()
    cands = enumerate_candidates(m)
    jobs = [(tuple(cands[i:i + chunk]), m, tri_678, depth) for i in range(0, len(cands), chunk)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_check_chunk, jobs))
    else:
        parts = [_check_chunk(j) for j in jobs]
    results = [r for part in parts for r in part]
    h = hashlib.sha256()
    admissible, violations, inconclusive = [], [], 0
    for r in results:
        h.update(r.digest_line().encode())
        h.update(b"\n")
        if r.inconclusive:
            inconclusive += 1
        if r.admissible:
            admissible.append(r)
            if any(d.fails for d in (r.disjoint, *r.monotone)):
                violations.append(r.digest_line())
    return BaseCaseRecord(
        m=m,
        candidate_count=len(cands),
        recount=recount_candidates(m),
        admissible=admissible,
        rejected_count=len(results) - len(admissible),
        violations=violations,
        inconclusive=inconclusive,
        digest=h.hexdigest(),
        runtime=time.perf_counter() - start,
    )


# -- positive controls -----------------------------------------------------

POSITIVE_SCALE_LIMIT = 4
NEGATIVE_SCALE_LIMIT = 3


def positive_controls(depth: int = DEFAULT_DEPTH) -> list[dict]:
    out = []
    F = IFS((F1, F2, F3))
    dec = verify_attractor(F, 1, depth)
    out.append({"n": 1, "source": "gasket maps f1, f2, f3", "maps": [str(f) for f in F],
                "decision": dec.to_dict(), "holds": dec.holds})
    for n in (2, 3, 4):
        res = None
        for e in range(1, POSITIVE_SCALE_LIMIT + 1):
            res = search_ifs(n, e, depth)
            if res.ifs is not None:
                break
        if res is None or res.ifs is None:
            out.append({"n": n, "source": "search", "maps": [], "decision": None, "holds": False})
            continue
        dec = verify_attractor(res.ifs, n, depth)
        out.append({"n": n, "source": f"search ({res.method}, max scale 2^-{e})",
                    "maps": [str(f) for f in res.ifs], "decision": dec.to_dict(),
                    "holds": dec.holds})
    res = search_ifs(5, NEGATIVE_SCALE_LIMIT, depth)
    out.append({"n": 5, "source": f"bounded search, max scale 2^-{NEGATIVE_SCALE_LIMIT}",
                "maps": [str(f) for f in res.ifs] if res.ifs else [],
                "result": "none" if res.ifs is None else "found",
                "note": "bounded search only: consistent with the theorem, not a proof of it",
                "holds": res.ifs is None})
    return out


# -- certificate -----------------------------------------------------------

TRUSTED_STEPS = [
    "scale localisation: an admissible contractive similitude f with f(E) in E has scale "
    "2^-m and sends P1, P2, P3 into B_m (case analysis on cells of A_N, not re-mechanised; "
    "the enumeration covers a strict superset of its conclusion)",
    "induction step for m >= 7: separation step gives T^-1 f(E) in E, then bijectivity of T "
    "and T(empty) = empty; only its arithmetic premises are checked here",
    "the solid cell triangle meets the gasket exactly in the cell's own gasket, so "
    "tri P6P7P8 intersected with E is the gasket piece on tri P6P7P8",
    "the gasket has full dihedral D3 symmetry, so the image of a gasket piece under a "
    "lattice similitude is the gasket piece on the image triangle",
    "a cover of the n-row by contractive images of itself makes the row the attractor "
    "(uniqueness of the attractor of a contractive IFS)",
]


@dataclass
class Certificate:
    sections: dict
    verdict: str
    failed_at: str | None
    base_records: list[BaseCaseRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self, with_timing: bool = False) -> dict:
        d = {"schema": SCHEMA}
        d.update(self.sections)
        if with_timing and self.base_records:
            d["base_cases"] = [r.to_dict(with_timing=True) for r in self.base_records]
        d["verdict"] = self.verdict
        d["failed_at"] = self.failed_at
        return d

    def to_text(self, with_timing: bool = False) -> str:
        return json.dumps(self.to_dict(with_timing), indent=2, ensure_ascii=True) + "\n"


def verify_theorem(
    overrides: dict[str, Point] | None = None,
    stated: StatedConstants = StatedConstants(),
    depth: int = DEFAULT_DEPTH,
    workers: int = 1,
    base_range: Iterable[int] = BASE_RANGE,
    controls: bool = True,
    progress: Callable[[str], None] | None = None,
) -> Certificate:
    """Run the whole pipeline; stops at the first failing section."""
    say = progress or log.info
    sections: dict = {"depth_budget": depth}

    def fail(where: str) -> Certificate:
        return Certificate(sections, "fail", where)

    say("deriving marked geometry")
    marks = derive_geometry(overrides, strict=False)
    sections["geometry"] = marks.to_dict()
    if not marks.ok or marks.tri_678 is None:
        return fail("geometry")

    say("checking constants")
    consts = check_constants(marks, stated)
    sections["constant_checks"] = [c.to_dict() for c in consts]
    if not all(c.holds for c in consts):
        return fail("constant_checks")

    say("checking nesting chain")
    chain = nesting_chain(marks.tri_678, CHAIN_LENGTH, depth)
    sections["nesting_chain"] = chain
    if not all(c["triangle_nested"] and c["piece_nested"]["verdict"] == "holds" for c in chain):
        return fail("nesting_chain")

    records = []
    sections["base_cases"] = []
    for m in base_range:
        say(f"base case m={m}")
        rec = verify_base_case(m, marks.tri_678, depth, workers)
        say(f"  candidates={rec.candidate_count} admissible={rec.admissible_count} "
            f"violations={len(rec.violations)} inconclusive={rec.inconclusive} "
            f"({rec.runtime:.1f}s)")
        records.append(rec)
        sections["base_cases"].append(rec.to_dict())
        if not rec.ok:
            cert = fail(f"base_case m={m}")
            cert.base_records = records
            return cert

    arith = induction_arithmetic(stated)
    sections["induction_arithmetic"] = [c.to_dict() for c in arith]
    if not all(c.holds for c in arith):
        return fail("induction_arithmetic")

    sections["K_report"] = [
        {"m": r.m, "map": str(c.map), "K": r.m,
         "disjoint_for_k": f"{r.m}..{r.m + MONOTONE_EXTRA}"}
        for r in records for c in r.admissible
    ]

    # the contradiction: each admissible f misses T^m(tri P6P7P8), hence by
    # nesting every later image, so K is the largest such m
    E = build_E(5)
    K = max((r.m for r in records if r.admissible), default=1)
    TK = T.power(K)
    piece = GasketPiece(marks.tri_678)
    inner = image_of_union(TK, GasketUnion([piece]))
    meets = triangle_meets_union(image_triangle(TK, marks.tri_678), E, depth)
    inside = piece_subset_union(inner.pieces[0], E, depth)
    seed = triangle_meets_union(marks.tri_678, E, depth)
    sections["contradiction"] = {
        "tri_678_meets_E": seed.to_dict(),
        "K": K,
        "nesting_chain_reaches_K": K <= CHAIN_LENGTH,
        "T^K(piece_678)_inside_E": inside.to_dict(),
        "T^K(tri_678)_meets_E": meets.to_dict(),
        "statement": "for every admissible map the image of E misses T^K(tri P6P7P8), "
                     "yet T^K(tri P6P7P8) meets E, so E is not the union of finitely "
                     "many admissible images",
    }
    if not (seed.fails and inside.holds and meets.fails and K <= CHAIN_LENGTH):
        return fail("contradiction")

    if controls:
        say("positive controls")
        pc = positive_controls(depth)
        sections["positive_controls"] = pc
        if not all(c["holds"] for c in pc):
            return fail("positive_controls")

    sections["trusted_steps"] = TRUSTED_STEPS
    cert = Certificate(sections, "pass", None)
    cert.base_records = records
    return cert


def sabotage_from_text(items: Sequence[str]) -> tuple[dict[str, Point], StatedConstants]:
    """Parse negative-control hooks like ``P5=(3/4, 1/2*sqrt3)`` or
    ``gap_sq=1/256``."""
    from .surd import parse_point, parse_surd

    points: dict[str, Point] = {}
    consts: dict = {}
    for item in items:
        key, _, value = item.partition("=")
        key = key.strip()
        if key.startswith("P"):
            points[key] = parse_point(value)
        elif key in ("diam_sq", "gap_sq"):
            consts[key] = parse_surd(value)
        elif key in ("k_bound", "diam_bound"):
            consts[key] = Fraction(value.strip())
        elif key == "step_exponent":
            consts[key] = int(value)
        else:
            raise ValueError(f"unknown sabotage key {key!r}")
    return points, StatedConstants(**consts)
