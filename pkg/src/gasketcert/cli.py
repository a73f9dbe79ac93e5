"""Command-line entry point: ``gasketcert <command> [options]``.

Exit codes: 0 when the requested check passes, 1 when it fails or is
inconclusive, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from pathlib import Path

from .algebra import DEFAULT_DEPTH
from .ifs import search_ifs, verify_attractor
from .render import MAX_DEPTH, figure_scene, render_svg
from .surd import format_surd
from .verifier import (
    check_candidate,
    check_constants,
    derive_geometry,
    enumerate_candidates,
    induction_arithmetic,
    recount_candidates,
    sabotage_from_text,
    verify_base_case,
    verify_theorem,
)

log = logging.getLogger("gasketcert")

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _base_range(text: str) -> int:
    m = int(text)
    if not 1 <= m <= 6:
        raise argparse.ArgumentTypeError("m must be in 1..6")
    return m


def _depth(text: str) -> int:
    d = int(text)
    if d < 0:
        raise argparse.ArgumentTypeError("depth must be non-negative")
    return d


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gasketcert", description=__doc__.splitlines()[0])
    p.add_argument("--depth-budget", type=_depth, default=DEFAULT_DEPTH,
                   help="subdivision budget for decision procedures (default %(default)s)")
    p.add_argument("--workers", type=int, default=1, help="worker processes for base cases")
    p.add_argument("--cert-out", type=Path, help="write the certificate here")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for sampled cross-checks (never affects verdicts)")
    p.add_argument("--sabotage", action="append", default=[], metavar="KEY=VALUE",
                   help="negative control: override a marked point or stated constant")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("verify", help="run the full pipeline and emit the certificate")
    b = sub.add_parser("base-case", help="exhaustive check at one scale")
    b.add_argument("--m", type=_base_range, required=True)
    b.add_argument("--sample", type=int, default=0,
                   help="also re-check this many random candidates in-process")
    e = sub.add_parser("enumerate", help="list candidate maps at scale 2^-m")
    e.add_argument("--m", type=int, required=True)
    e.add_argument("--count-only", action="store_true")
    i = sub.add_parser("ifs", help="bounded search for an IFS of n gaskets in a row")
    i.add_argument("--n", type=int, required=True, choices=range(1, 6))
    i.add_argument("--max-scale", type=int, default=3, help="largest scale exponent e")
    r = sub.add_parser("render", help="write an SVG figure")
    r.add_argument("--figure", required=True, help="1..8, A<n> or B<n>")
    r.add_argument("--depth", type=int, default=6)
    r.add_argument("--out", type=Path, required=True)
    sub.add_parser("constants", help="check the exact constants")
    return p


def _emit(args, cert_text: str) -> None:
    if args.cert_out:
        args.cert_out.write_text(cert_text)
    else:
        sys.stdout.write(cert_text)


def cmd_verify(args) -> int:
    points, stated = args.points, args.stated
    cert = verify_theorem(points or None, stated, args.depth_budget, args.workers,
                          progress=log.info)
    _emit(args, cert.to_text())
    print(f"verdict: {cert.verdict}" + (f" (failed at {cert.failed_at})" if cert.failed_at else ""),
          file=sys.stderr)
    return EXIT_PASS if cert.passed else EXIT_FAIL


def cmd_base_case(args) -> int:
    points = args.points
    g = derive_geometry(points or None, strict=False)
    if not g.ok or g.tri_678 is None:
        print("geometry constraints failed", file=sys.stderr)
        return EXIT_FAIL
    rec = verify_base_case(args.m, g.tri_678, args.depth_budget, args.workers)
    print(f"m={rec.m} candidates={rec.candidate_count} recount={rec.recount['total']} "
          f"admissible={rec.admissible_count} violations={len(rec.violations)} "
          f"inconclusive={rec.inconclusive} runtime={rec.runtime:.2f}s")
    print(f"digest={rec.digest}")
    for v in rec.violations:
        print(f"violation: {v}")
    ok = rec.ok
    if args.sample:
        rng = random.Random(args.seed)
        cands = enumerate_candidates(args.m)
        for f in rng.sample(cands, min(args.sample, len(cands))):
            again = check_candidate(f, args.m, g.tri_678, args.depth_budget)
            ok &= not again.inconclusive
        print(f"re-checked {min(args.sample, len(cands))} sampled candidates")
    if args.cert_out:
        args.cert_out.write_text(json.dumps(rec.to_dict(), indent=2) + "\n")
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_enumerate(args) -> int:
    if args.m < 1:
        raise UsageError("m must be positive")
    cands = enumerate_candidates(args.m)
    rc = recount_candidates(args.m)
    if args.count_only:
        print(f"m={args.m} candidates={len(cands)} recount={rc['total']} "
              f"(up={rc['up']} down={rc['down']} x {rc['assignments']})")
    else:
        for f in cands:
            print(f)
    return EXIT_PASS if len(cands) == rc["total"] else EXIT_FAIL


def cmd_ifs(args) -> int:
    if args.max_scale < 1:
        raise UsageError("--max-scale must be at least 1")
    res = search_ifs(args.n, args.max_scale, args.depth_budget)
    if res.ifs is None:
        print(f"n={args.n} max-scale={args.max_scale}: none found "
              f"({res.placements} placements searched)")
        if args.n == 5:
            print("bounded search only: consistent with the theorem, not a proof of it")
        return EXIT_FAIL if args.n < 5 else EXIT_PASS
    dec = verify_attractor(res.ifs, args.n, args.depth_budget)
    print(f"n={args.n} method={res.method} maps={len(res.ifs)} verify={dec.verdict.value}")
    for f in res.ifs:
        print(f"  {f}")
    if args.n == 5:
        # a decomposition of five in a row would contradict the theorem
        return EXIT_FAIL
    return EXIT_PASS if dec.holds else EXIT_FAIL


def cmd_render(args) -> int:
    if not 0 <= args.depth <= MAX_DEPTH:
        raise UsageError(f"--depth must be in 0..{MAX_DEPTH}")
    try:
        scene = figure_scene(args.figure)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    svg = render_svg(scene, args.depth)
    args.out.write_text(svg)
    print(f"wrote {args.out} ({svg.count('<polygon ')} polygons)")
    return EXIT_PASS


def cmd_constants(args) -> int:
    points, stated = args.points, args.stated
    g = derive_geometry(points or None, strict=False)
    checks = list(g.checks) + check_constants(g, stated) + induction_arithmetic(stated)[:1]
    for c in checks:
        print(f"[{'ok' if c.holds else 'FAIL'}] {c.name}")
    print(f"diam^2(E) = {format_surd(g.const_diam_sq)}")
    if g.const_gap_sq is not None:
        print(f"gap^2 = {format_surd(g.const_gap_sq)}")
    return EXIT_PASS if all(c.holds for c in checks) else EXIT_FAIL


COMMANDS = {
    "verify": cmd_verify,
    "base-case": cmd_base_case,
    "enumerate": cmd_enumerate,
    "ifs": cmd_ifs,
    "render": cmd_render,
    "constants": cmd_constants,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s")
    if args.workers < 1:
        parser.print_usage(sys.stderr)
        print("--workers must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        args.points, args.stated = sabotage_from_text(args.sabotage)
    except (ValueError, KeyError) as exc:
        print(f"usage error: bad --sabotage: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
