"""Command line entry point.

Exit status: 0 success, 1 a verified negative answer (e.g. not a member),
2 usage or parse error, 3 backend disagreement, 4 regression mismatch.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from . import __version__
from .constructor import compose_even, pell_by_recurrence, pell_degrees, scan_degree
from .corpus import A143105, A143106, SHARP_ODD, CorpusMismatch, compare_with_fixtures
from .diagram import analyze, sign_diagram, structural_check
from .exactpoly import format_poly, invariant_even, invariant_sharp, is_member, parse_poly, quotient_q
from .harness import (
    ReportError,
    cache_path,
    compare_reports,
    dumps,
    load,
    make_manifest,
    manifest_json,
    merge_reports,
    persist,
)
from .nullsearch import enumerate_sharp, enumerate_with_terms, sharp_term_count
from .report import SearchReport

log = logging.getLogger("sharppoly")

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_DISAGREE, EXIT_REGRESSION = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _shard(text: str) -> Tuple[int, int]:
    try:
        i, k = (int(v) for v in text.split("/"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"shard must look like i/k, got {text!r}") from None
    if not 0 <= i < k:
        raise argparse.ArgumentTypeError(f"need 0 <= i < k, got {text!r}")
    return i, k


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sharppoly", description="Sharp polynomials in H(2,d).")
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    e = sub.add_parser("enumerate", help="all sharp (or N-term) polynomials of one degree")
    e.add_argument("--degree", type=_positive, required=True)
    e.add_argument("--terms", type=_positive, help="exact term count instead of the sharp one")
    e.add_argument("--backend", choices=("nullspace", "mip", "both"), default="nullspace")
    e.add_argument("--shard", type=_shard, default=(0, 1), help="i/k: run the i-th of k slices")
    e.add_argument("--jobs", type=_positive, default=1)
    e.add_argument("--format", choices=("json", "csv", "text"), default="text")
    e.add_argument("--out", type=Path)
    e.add_argument("--check", action="store_true", help="compare odd-degree results with the stored fixtures")
    e.add_argument("--split-depth", type=int, default=0, help="mip: subtree depth handed to workers")
    e.add_argument("--pivot-budget", type=_positive, default=10 ** 6, help="mip: per-LP pivot limit")

    v = sub.add_parser("verify", help="membership and sharpness of one polynomial")
    v.add_argument("--poly", required=True)
    v.add_argument("--degree", type=_positive, required=True)

    i = sub.add_parser("invariant", help="the group-invariant polynomial f_d")
    i.add_argument("--degree", type=_positive, required=True)
    i.add_argument("--even", action="store_true", help="even-index member (1 on the line, not sharp)")

    c = sub.add_parser("construct", help="a sharp polynomial other than f_d, if the constructions find one")
    c.add_argument("--degree", type=_positive, required=True)
    c.add_argument("--depth", type=_positive, default=1)

    s = sub.add_parser("scan", help="substitution scan over odd degrees, JSON lines")
    s.add_argument("--max-degree", type=_positive, required=True)
    s.add_argument("--min-degree", type=_positive, default=1)
    s.add_argument("--depth", type=_positive, default=1)
    s.add_argument("--jobs", type=_positive, default=1)
    s.add_argument("--out", type=Path)

    g = sub.add_parser("diagram", help="sign diagram of the quotient with sinks and sources")
    g.add_argument("--poly", required=True)
    g.add_argument("--degree", type=_positive, required=True)

    m = sub.add_parser("merge", help="combine shard fragments written with --format json")
    m.add_argument("fragments", nargs="+", type=Path)
    m.add_argument("--format", choices=("json", "csv", "text"), default="json")
    m.add_argument("--out", type=Path)

    q = sub.add_parser("sequences", help="integer sequences")
    q.add_argument("--name", choices=("a143105", "a143106", "pell"), required=True)
    q.add_argument("--count", type=_positive)
    q.add_argument("--compute", action="store_true", help="a143105: recompute by scanning and compare")
    return ap


# --- enumerate -------------------------------------------------------------------


def _run_backend(args, backend: str) -> SearchReport:
    d = args.degree
    if backend == "mip":
        from .mipsearch import build_model, mip_search

        if args.terms is not None and args.terms != sharp_term_count(d):
            raise UsageError("the mip backend only searches for sharp polynomials")
        return mip_search(d, build_model(d), jobs=args.jobs, split_depth=args.split_depth,
                          pivot_budget=args.pivot_budget, shard=args.shard)
    if args.terms is not None:
        return enumerate_with_terms(d, args.terms, shard=args.shard, jobs=args.jobs)
    return enumerate_sharp(d, shard=args.shard, jobs=args.jobs)


def _cached_or_run(args, backend: str) -> SearchReport:
    whole = args.shard == (0, 1)
    key = None
    if whole:
        from .mipsearch import build_model
        from .nullsearch import sharp_config, terms_config
        from .report import fingerprint

        if backend == "mip":
            flags = build_model(args.degree).flags()
        elif args.terms is not None:
            flags = terms_config(args.degree, args.terms).flags()
        else:
            flags = sharp_config(args.degree).flags()
        key = cache_path(backend, (args.degree, flags["n_terms"], fingerprint(flags)))
    if key is not None and key.exists():
        log.info("loading cached %s", key)
        return load(key)
    rep = _run_backend(args, backend)
    if key is not None:
        persist(rep, key)
    return rep


def _render(rep: SearchReport, fmt: str) -> str:
    if fmt == "json":
        return dumps(rep, volatile=rep.shards[0].get("count", 1) > 1 if rep.shards else False)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["degree", "n_terms", "backend", "canonical", "raw", "families"])
        w.writerow([rep.degree, rep.n_terms, rep.backend, len(rep.polynomials), rep.raw_count, len(rep.families)])
        return buf.getvalue()
    lines = [f"degree {rep.degree}, {rep.n_terms} terms, backend {rep.backend}: "
             f"{len(rep.polynomials)} up to swap, {rep.raw_count} raw, {len(rep.families)} families"]
    lines += [f"  {format_poly(p)}" for p in rep.polynomials]
    for f in rep.families:
        lines.append(f"  family on {list(f.support)} (kernel dim {f.nullspace_dim})")
    return "\n".join(lines) + "\n"


def cmd_enumerate(args) -> int:
    t0 = time.perf_counter()
    backends = ("nullspace", "mip") if args.backend == "both" else (args.backend,)
    reports = [_cached_or_run(args, b) for b in backends]
    status = EXIT_OK
    if len(reports) == 2:
        diff = compare_reports(*reports)
        if diff:
            sys.stderr.write("backends disagree\n")
            for p in diff.only_left:
                sys.stderr.write(f"  nullspace only: {format_poly(p)}\n")
            for p in diff.only_right:
                sys.stderr.write(f"  mip only: {format_poly(p)}\n")
            status = EXIT_DISAGREE
    if args.check and args.terms is None and args.degree in SHARP_ODD and args.shard == (0, 1):
        for rep in reports:
            try:
                compare_with_fixtures(args.degree, rep.polynomials)
            except CorpusMismatch as exc:
                sys.stderr.write(f"regression mismatch ({rep.backend}): {exc}\n")
                status = status or EXIT_REGRESSION
    parts = [_render(r, args.format) for r in reports]
    if args.format == "json" and len(parts) > 1:
        text = "[\n" + ",\n".join(x.rstrip("\n") for x in parts) + "\n]\n"
    else:
        text = "".join(parts)
    if args.out:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(text)
        man = make_manifest(sys.argv, vars_for_manifest(args), reports, time.perf_counter() - t0)
        args.out.with_name(args.out.name + ".manifest.json").write_text(manifest_json(man))
    else:
        sys.stdout.write(text)
    return status


def vars_for_manifest(args) -> dict:
    out = {}
    for k, v in vars(args).items():
        if k == "func":
            continue
        out[k] = str(v) if isinstance(v, Path) else (list(v) if isinstance(v, tuple) else v)
    return out


# --- the small commands ----------------------------------------------------------


def cmd_verify(args) -> int:
    p = parse_poly(args.poly)
    rep = is_member(p, args.degree)
    n = sharp_term_count(args.degree)
    print(f"polynomial: {format_poly(p)}")
    print(f"member of H(2,{args.degree}): {'yes' if rep else 'no'}")
    for r in rep.reasons():
        print(f"  {r}")
    if not rep:
        return EXIT_NO
    print(f"terms: {p.term_count} (sharp needs {n}): {'sharp' if p.term_count == n else 'not sharp'}")
    chk = structural_check(p, args.degree, sharp=p.term_count == n)
    print(f"diagram: {len(chk.sinks)} sinks, {len(chk.sources)} sources, {'consistent' if chk.ok else 'inconsistent'}")
    for prob in chk.problems:
        print(f"  {prob}")
    return EXIT_OK


def cmd_invariant(args) -> int:
    d = args.degree
    if args.even:
        if d % 2:
            raise UsageError("--even needs an even degree")
        print(format_poly(invariant_even(d)))
    else:
        if d % 2 == 0:
            raise UsageError("f_d is sharp only for odd d; use --even for even indices")
        print(format_poly(invariant_sharp(d)))
    return EXIT_OK


def cmd_construct(args) -> int:
    d = args.degree
    if d % 2 == 0:
        # glue pairs of invariant polynomials of odd degree
        for d1 in range(1, d, 2):
            print(format_poly(compose_even(invariant_sharp(d1), invariant_sharp(d - d1))))
        return EXIT_OK
    rec = scan_degree(d, args.depth)
    if not rec.found_noninvariant:
        print(f"no substitution of depth <= {args.depth} leaves f_{d}")
        return EXIT_NO
    for p in rec.params:
        print(f"# m={p.m} j={p.j} k={p.k} c={p.c}")
    print(format_poly(rec.polynomial))
    return EXIT_OK


def cmd_scan(args) -> int:
    from .constructor import scan_uniqueness

    lo = args.min_degree | 1
    recs = scan_uniqueness(range(lo, args.max_degree + 1, 2), depth=args.depth, jobs=args.jobs)
    text = "".join(json.dumps(r.to_json(), sort_keys=True) + "\n" for r in recs)
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_diagram(args) -> int:
    p = parse_poly(args.poly)
    if not is_member(p, args.degree):
        sys.stderr.write(f"{format_poly(p)} is not in H(2,{args.degree})\n")
        return EXIT_NO
    diag = sign_diagram(quotient_q(p), args.degree)
    res = analyze(diag)
    print(diag.render(marks=res.sinks | res.sources))
    print(f"sinks ({len(res.sinks)}): {' '.join(f'x^{m.j}y^{m.k}' for m in sorted(res.sinks))}")
    print(f"sources ({len(res.sources)}): {' '.join(f'x^{m.j}y^{m.k}' for m in sorted(res.sources))}")
    return EXIT_OK


def cmd_sequences(args) -> int:
    if args.name == "pell":
        seq = pell_degrees(args.count or 5)
        if seq != pell_by_recurrence(len(seq)):
            sys.stderr.write("closed form and recurrence disagree\n")
            return EXIT_REGRESSION
    elif args.name == "a143106":
        seq = list(A143106)[: args.count]
    else:
        seq = list(A143105)[: args.count]
        if args.compute:
            from .constructor import scan_uniqueness

            top = seq[-1]
            got = [r.degree for r in scan_uniqueness(range(1, top + 1, 2)) if not r.found_noninvariant]
            if got != seq:
                sys.stderr.write(f"scan gives {got}\n")
                return EXIT_REGRESSION
    print(", ".join(str(v) for v in seq))
    return EXIT_OK


def cmd_merge(args) -> int:
    rep = merge_reports([load(f) for f in args.fragments])
    # a merged report is whole again: drop the shard map so the output is deterministic
    text = _render(rep, args.format) if args.format != "json" else dumps(rep)
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


COMMANDS = {
    "merge": cmd_merge,
    "enumerate": cmd_enumerate,
    "verify": cmd_verify,
    "invariant": cmd_invariant,
    "construct": cmd_construct,
    "scan": cmd_scan,
    "diagram": cmd_diagram,
    "sequences": cmd_sequences,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return COMMANDS[args.command](args)
    except ReportError as exc:
        sys.stderr.write(f"corrupted result: {exc}\n")
        return EXIT_REGRESSION
    except (UsageError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
