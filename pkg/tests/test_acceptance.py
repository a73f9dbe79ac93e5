"""Acceptance criteria 1-9, one reported line per criterion.

The full pipeline runs twice (one worker in-process, two workers through
the CLI); both runs are shared by the criteria that need them.
"""
from __future__ import annotations

import json
import random
import time
from fractions import Fraction

import pytest

from oracle import meets_oracle, point_status, subset_oracle, tri_coords

from gasketcert.algebra import (
    image_of_union,
    image_triangle,
    piece_subset_union,
    triangle_meets_union,
)
from gasketcert.cli import main
from gasketcert.model import GasketUnion, LatticeTriangle, build_E, point_in_gasket, point_in_union
from gasketcert.similitude import T
from gasketcert.surd import Surd, lattice_point, parse_point
from gasketcert.verifier import (
    StatedConstants,
    check_candidate,
    check_constants,
    derive_geometry,
    diameter_sq,
    enumerate_candidates,
    induction_arithmetic,
    nesting_chain,
    verify_theorem,
)

pytestmark = pytest.mark.slow


def report(capsys, n: int, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"\n[acceptance {n}] {'PASS' if ok else 'FAIL'}: {detail}")


@pytest.fixture(scope="module")
def full_run(tmp_path_factory):
    start = time.perf_counter()
    cert = verify_theorem(workers=1)
    elapsed = time.perf_counter() - start
    path = tmp_path_factory.mktemp("cert") / "cert.json"
    code = main(["--workers", "2", "--cert-out", str(path), "verify"])
    return {
        "cert": cert,
        "text": cert.to_text(),
        "doc": json.loads(cert.to_text()),
        "elapsed": elapsed,
        "cli_code": code,
        "cli_text": path.read_text(),
    }


def test_1_exact_constants(capsys):
    start = time.perf_counter()
    g = derive_geometry()
    checks = check_constants(g)
    diam = diameter_sq(build_E(5))
    elapsed = time.perf_counter() - start
    ok = (diam == Surd(25) and g.const_gap_sq == Surd(Fraction(3, 256))
          and all(c.holds for c in checks) and elapsed < 1.0)
    report(capsys, 1, ok, f"diam^2={diam} gap^2={g.const_gap_sq} in {elapsed:.3f}s")
    assert ok


SABOTAGE = {
    "P4": lattice_point(Fraction(1, 4), Fraction(1, 8)),
    "P5": lattice_point(Fraction(3, 4), Fraction(1, 2)),
    "P6": lattice_point(Fraction(1, 2), Fraction(1, 2)),
    "P7": lattice_point(Fraction(5, 8), Fraction(1, 4)),
    "P8": lattice_point(Fraction(7, 16), Fraction(3, 8)),
}


def test_2_geometry_derivation(capsys):
    g = derive_geometry()
    flipped = [k for k, v in SABOTAGE.items() if not derive_geometry({k: v}, strict=False).ok]
    ok = g.ok and len(g.checks) == 4 and len(flipped) == len(SABOTAGE) >= 3
    report(capsys, 2, ok, f"{sum(c.holds for c in g.checks)}/4 constraints hold; "
                          f"{len(flipped)}/{len(SABOTAGE)} sabotage cases flip to fail")
    assert ok


def test_3_nesting_chain(capsys):
    g = derive_geometry()
    start = time.perf_counter()
    chain = nesting_chain(g.tri_678, 8)
    elapsed = time.perf_counter() - start
    wanted = [c for c in chain if 1 <= c["k"] <= 8]
    ok = (len(wanted) == 8 and all(c["triangle_nested"] for c in wanted)
          and all(c["piece_nested"]["verdict"] == "holds" for c in wanted) and elapsed < 1.0)
    report(capsys, 3, ok, f"T^(k+1) inside T^k for k=1..8 in {elapsed:.3f}s")
    assert ok


def test_4_base_cases(capsys, full_run):
    cert = full_run["cert"]
    recs = {r.m: r for r in cert.base_records}
    doc_cases = full_run["doc"].get("base_cases", [])
    ok = (sorted(recs) == [1, 2, 3, 4, 5, 6]
          and all(not r.violations and r.inconclusive == 0 for r in recs.values())
          and all(r.candidate_count == r.recount["total"] for r in recs.values())
          and recs[1].admissible_count == 12
          and recs[6].runtime < 600
          and [c["m"] for c in doc_cases] == [1, 2, 3, 4, 5, 6]
          and all("candidate_count" in c and "admissible_count" in c for c in doc_cases))

    # float cross-check on a 1% sample of the m=6 candidates
    g = derive_geometry()
    E = build_E(5)
    e_float = [tri_coords(p.tri) for p in E.pieces]
    rng = random.Random(6)
    cands = enumerate_candidates(6)
    sample = rng.sample(cands, len(cands) // 100)
    disagree = decided = 0
    for f in sample:
        r = check_candidate(f, 6, g.tri_678, E=E)
        if r.admissible:
            images = [tri_coords(image_triangle(f, p.tri)) for p in E.pieces]
            verdicts = [subset_oracle(t, e_float, 6) for t in images]
            meet = meets_oracle(tri_coords(image_triangle(T.power(6), g.tri_678)), images)
            if None not in verdicts:
                decided += 1
                disagree += not all(verdicts)
            if meet is not None:
                disagree += meet
        else:
            w = r.rejection.witness
            s = point_status((float(w.x), float(w.y)), e_float)
            if s is not None:
                decided += 1
                disagree += s != "out"
    ok = ok and disagree == 0
    counts = " ".join(f"m{m}:{r.admissible_count}/{r.candidate_count}" for m, r in sorted(recs.items()))
    report(capsys, 4, ok, f"admissible/candidates {counts}; violations=0; "
                          f"m=6 took {recs[6].runtime:.1f}s; 1% float sample "
                          f"{decided}/{len(sample)} decided, {disagree} disagreements")
    assert ok


def test_5_induction_arithmetic(capsys):
    checks = induction_arithmetic(StatedConstants())
    exact = (Fraction(1, 2 ** 7) <= Fraction(1, 80) < Fraction(1, 2 ** 6))
    ok = exact and all(c.holds for c in checks)
    report(capsys, 5, ok, "2^-7 <= 1/80 < 2^-6")
    assert ok


def test_6_certificate(capsys, full_run):
    ok = (full_run["cli_code"] == 0 and full_run["doc"]["verdict"] == "pass"
          and full_run["doc"]["schema"] == "gasket-cert/1"
          and full_run["cli_text"] == full_run["text"])
    report(capsys, 6, ok, f"verify exit={full_run['cli_code']} verdict={full_run['doc']['verdict']}; "
                          f"1-worker and 2-worker certificates byte-identical="
                          f"{full_run['cli_text'] == full_run['text']} "
                          f"({len(full_run['text'])} bytes, run {full_run['elapsed']:.0f}s)")
    assert ok


def test_7_positive_controls(capsys, full_run):
    pcs = {c["n"]: c for c in full_run["doc"]["positive_controls"]}
    ok = all(pcs[n]["holds"] and pcs[n]["decision"]["verdict"] == "holds" for n in (1, 2, 3, 4))
    ok = ok and pcs[5]["result"] == "none" and "not a proof" in pcs[5]["note"]
    ok = ok and "2^-3" in pcs[5]["source"]
    sizes = ", ".join(f"n={n}:{len(pcs[n]['maps'])} maps" for n in (1, 2, 3, 4))
    report(capsys, 7, ok, f"{sizes} verify; n=5 at e<=3: {pcs[5]['result']} (non-conclusive)")
    assert ok


def _walk(node, path=""):
    if isinstance(node, dict):
        for k, v in node.items():
            yield from _walk(v, f"{path}.{k}")
        yield path, node
    elif isinstance(node, list):
        for i, v in enumerate(node):
            yield from _walk(v, f"{path}[{i}]")


def test_8_witness_soundness_and_oracle(capsys, full_run):
    E = build_E(5)
    e_float = [tri_coords(p.tri) for p in E.pieces]

    # every witness emitted while checking all candidates for m = 1..3
    witnesses = bad = 0
    tri = derive_geometry().tri_678
    for m in (1, 2, 3):
        for f in enumerate_candidates(m):
            r = check_candidate(f, m, tri, E=E)
            if r.rejection is not None and r.rejection.fails:
                w = r.rejection.witness
                images = [image_triangle(f, p.tri) for p in E.pieces]
                witnesses += 1
                bad += not (any(point_in_gasket(w, t).inside for t in images)
                            and point_in_union(w, E).outside)
    # every witness in the certificate is a common point of a triangle and E
    for path, node in _walk(full_run["doc"]):
        if node.get("witness"):
            w = parse_point(node["witness"])
            witnesses += 1
            bad += not point_in_union(w, E).inside

    # float rasterization oracle on random queries
    rng = random.Random(2024)
    pools = {m: enumerate_candidates(m) for m in (1, 2, 3, 4)}
    decided = disagree = asked = 0
    while decided < 600 and asked < 3000:
        asked += 1
        m = rng.randint(1, 4)
        f = rng.choice(pools[m])
        if rng.random() < 0.5:
            img = image_triangle(f, rng.choice(E.pieces).tri)
            exact = piece_subset_union(img, E)
            want = subset_oracle(tri_coords(img), e_float, img.n)
            got = exact.holds
        else:
            fE = image_of_union(f, E)
            if rng.random() < 0.5:
                d = image_triangle(T.power(m), tri)
            else:
                n = rng.randint(0, 3)
                d = LatticeTriangle(rng.randint(-2, 5 * 2 ** n), rng.randint(-1, 2 ** n),
                                    n, rng.random() < 0.5)
            exact = triangle_meets_union(d, fE)
            want = meets_oracle(tri_coords(d), [tri_coords(p.tri) for p in fE.pieces])
            got = exact.fails
        assert not exact.inconclusive
        if want is None:
            continue
        decided += 1
        disagree += want != got
    ok = bad == 0 and witnesses > 0 and decided >= 500 and disagree == 0
    report(capsys, 8, ok, f"{witnesses} witnesses re-verified ({bad} bad); oracle "
                          f"{decided} decided of {asked} queries, {disagree} disagreements")
    assert ok


def test_9_no_inconclusive(capsys, full_run):
    doc = full_run["doc"]
    verdicts = [node["verdict"] for _, node in _walk(doc) if "verdict" in node and "depth_used" in node]
    inconclusive = sum(v == "inconclusive" for v in verdicts)
    inconclusive += sum(r.inconclusive for r in full_run["cert"].base_records)
    ok = inconclusive == 0 and doc["depth_budget"] == 12 and doc["verdict"] == "pass"
    n_decisions = sum(r.candidate_count for r in full_run["cert"].base_records) + len(verdicts)
    report(capsys, 9, ok, f"{inconclusive} inconclusive over {n_decisions} recorded "
                          f"decisions at depth budget {doc['depth_budget']}")
    assert ok
