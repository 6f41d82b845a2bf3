"""Result persistence, shard merging, backend comparison and run manifests.

Report files hold only what is determined by the inputs, so the same run
gives byte-identical JSON whatever the job or shard count.  Timing, counters
and the shard map go to a sidecar manifest instead.
"""
from __future__ import annotations

import json
import os
import platform
import sys
import time
from collections import Counter
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from . import __version__
from .exactpoly import BivariatePoly, Monomial, is_member
from .report import FamilyWitness, SearchReport, canonical_set

__all__ = [
    "SCHEMA_VERSION",
    "ReportError",
    "RunManifest",
    "Disagreement",
    "report_to_dict",
    "dumps",
    "persist",
    "load",
    "loads",
    "merge_reports",
    "compare_reports",
    "cache_path",
    "make_manifest",
]

SCHEMA_VERSION = 1


class ReportError(ValueError):
    """A stored report breaks the schema or fails re-verification."""


@dataclass
class RunManifest:
    command: List[str]
    config: Dict[str, Any]
    version: str = __version__
    wall_time_s: float = 0.0
    shard_times: List[Dict[str, Any]] = field(default_factory=list)
    stats: Dict[str, Any] = field(default_factory=dict)
    environment: Dict[str, str] = field(default_factory=dict)


def make_manifest(argv: Sequence[str], config: Dict[str, Any], reports: Sequence[SearchReport], wall: float) -> RunManifest:
    import numpy

    shard_times, stats = [], {}
    for r in reports:
        for s in r.shards:
            shard_times.append({"backend": r.backend, **s, **{k: round(v, 3) for k, v in r.timing.items()}})
        stats[r.backend] = r.stats
    env = {
        "python": sys.version.split()[0],
        "platform": platform.platform(),
        "numpy": numpy.__version__,
        "cpus": str(os.cpu_count()),
    }
    return RunManifest(list(argv), dict(config), wall_time_s=round(wall, 3),
                       shard_times=shard_times, stats=stats, environment=env)


# --- encoding ----------------------------------------------------------------


def _poly_to_json(p: BivariatePoly) -> Dict[str, Any]:
    terms = [{"j": str(m.j), "k": str(m.k), "num": str(c.numerator), "den": str(c.denominator)}
             for m, c in p.sorted_terms()]
    return {"terms": terms, "symmetric": p.is_symmetric()}


def _int(v: Any, what: str) -> int:
    if not isinstance(v, str):
        raise ReportError(f"{what} must be a decimal string, got {v!r}")
    try:
        return int(v)
    except ValueError:
        raise ReportError(f"{what} is not an integer: {v!r}") from None


def _poly_from_json(obj: Any) -> BivariatePoly:
    if not isinstance(obj, dict) or not isinstance(obj.get("terms"), list):
        raise ReportError(f"bad polynomial entry {obj!r}")
    terms = []
    for t in obj["terms"]:
        den = _int(t.get("den"), "den")
        if den <= 0:
            raise ReportError(f"non-positive denominator in {t}")
        terms.append(((_int(t.get("j"), "j"), _int(t.get("k"), "k")), Fraction(_int(t.get("num"), "num"), den)))
    p = BivariatePoly.from_terms(terms)
    if p.term_count != len(terms):
        raise ReportError(f"repeated or zero terms in {obj!r}")
    if "symmetric" in obj and obj["symmetric"] != p.is_symmetric():
        raise ReportError(f"symmetric flag does not match {p}")
    return p


def report_to_dict(report: SearchReport, volatile: bool = False) -> Dict[str, Any]:
    """JSON-ready dict; ``volatile`` adds stats, timing and shard map (used for fragments)."""
    out: Dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "degree": report.degree,
        "n_terms": report.n_terms,
        "backend": report.backend,
        "fingerprint": report.fingerprint,
        "flags": report.flags,
        "polynomials": [_poly_to_json(p) for p in report.polynomials],
        "raw": [_poly_to_json(p) for p in report.raw],
        "raw_count": report.raw_count,
        "families": [
            {
                "support": [[str(j), str(k)] for j, k in f.support],
                "nullspace_dim": f.nullspace_dim,
                "members": [_poly_to_json(m) for m in f.members],
            }
            for f in report.families
        ],
    }
    if volatile:
        out["stats"] = report.stats
        out["timing"] = report.timing
        out["shards"] = report.shards
    return out


def dumps(report: SearchReport, volatile: bool = False) -> str:
    return json.dumps(report_to_dict(report, volatile), indent=1, sort_keys=True) + "\n"


def persist(report: SearchReport, path, volatile: bool = False) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(report, volatile))
    return path


# --- decoding ----------------------------------------------------------------

_REQUIRED = ("schema_version", "degree", "n_terms", "backend", "fingerprint", "flags",
             "polynomials", "raw", "raw_count", "families")


def _verify(p: BivariatePoly, d: int, n: Optional[int], what: str) -> None:
    rep = is_member(p, d)
    if not rep:
        raise ReportError(f"{what} {p} fails re-verification: {'; '.join(rep.reasons())}")
    if n is not None and p.term_count != n:
        raise ReportError(f"{what} {p} has {p.term_count} terms, report says {n}")


def loads(text: str) -> SearchReport:
    """Parse, validate and re-verify a stored report; nothing stored is trusted."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ReportError(f"not JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise ReportError("top level must be an object")
    missing = [k for k in _REQUIRED if k not in obj]
    if missing:
        raise ReportError(f"missing keys {missing}")
    if obj["schema_version"] != SCHEMA_VERSION:
        raise ReportError(f"unsupported schema_version {obj['schema_version']!r}")
    d, n = obj["degree"], obj["n_terms"]
    if not isinstance(d, int) or not isinstance(n, int) or d < 1:
        raise ReportError("degree and n_terms must be positive integers")
    raw = [_poly_from_json(p) for p in obj["raw"]]
    for p in raw:
        _verify(p, d, n, "polynomial")
    if obj["raw_count"] != len(raw) or len(set(raw)) != len(raw):
        raise ReportError(f"raw_count {obj['raw_count']} does not match {len(raw)} distinct entries")
    listed = [_poly_from_json(p) for p in obj["polynomials"]]
    if listed != canonical_set(raw):
        raise ReportError("polynomials are not the sorted canonical set of raw")
    fams = []
    for f in obj["families"]:
        support = tuple((_int(j, "j"), _int(k, "k")) for j, k in f["support"])
        members = tuple(_poly_from_json(m) for m in f["members"])
        if len(members) != 2 or members[0] == members[1]:
            raise ReportError(f"family on {support} needs two distinct members")
        for m in members:
            _verify(m, d, None, "family member")
            if m.support != frozenset(Monomial(*s) for s in support):
                raise ReportError(f"family member {m} is off the support {support}")
        fams.append(FamilyWitness(support, int(f["nullspace_dim"]), members))
    rep = SearchReport(
        degree=d, n_terms=n, backend=obj["backend"], flags=obj["flags"], raw=raw, families=fams,
        stats=obj.get("stats", {}), timing=obj.get("timing", {}), shards=obj.get("shards", []),
    )
    if rep.fingerprint != obj["fingerprint"]:
        raise ReportError("fingerprint does not match the flags")
    return rep


def load(path) -> SearchReport:
    return loads(Path(path).read_text())


# --- merging and comparison ---------------------------------------------------


def merge_reports(parts: Sequence[SearchReport]) -> SearchReport:
    """Combine shard fragments of one run; all fragments must share flags and backend."""
    if not parts:
        raise ValueError("nothing to merge")
    head = parts[0]
    for p in parts[1:]:
        if (p.degree, p.n_terms, p.backend, p.fingerprint) != (head.degree, head.n_terms, head.backend, head.fingerprint):
            raise ReportError("fragments come from different runs")
    counts = {s.get("count") for p in parts for s in p.shards if "count" in s}
    if len(counts) == 1:
        count = counts.pop()
        seen = sorted(s["index"] for p in parts for s in p.shards)
        if seen != list(range(count)):
            raise ReportError(f"shards {seen} do not cover 0..{count - 1} exactly once")
    stats: Counter = Counter()
    timing: Counter = Counter()
    for p in parts:
        stats.update(p.stats)
        timing.update(p.timing)
    fams = {f.support: f for p in parts for f in p.families}
    return SearchReport(
        degree=head.degree, n_terms=head.n_terms, backend=head.backend, flags=head.flags,
        raw=[q for p in parts for q in p.raw], families=list(fams.values()),
        stats=dict(sorted(stats.items())), timing=dict(timing),
        shards=sorted((s for p in parts for s in p.shards), key=lambda s: s.get("index", 0)),
    )


@dataclass
class Disagreement:
    only_left: List[BivariatePoly]
    only_right: List[BivariatePoly]

    def __bool__(self) -> bool:
        return bool(self.only_left or self.only_right)


def compare_reports(a: SearchReport, b: SearchReport) -> Disagreement:
    """Symmetric difference of the raw sets.

    The raw sets determine the canonical ones, and a raw set that lost one
    member of a swap pair still has the same canonical set, so this is the
    stricter comparison.
    """
    sa, sb = set(a.raw), set(b.raw)
    key = BivariatePoly.sort_key
    return Disagreement(sorted(sa - sb, key=key), sorted(sb - sa, key=key))


def cache_path(backend: str, report_key: Tuple[int, int, str]) -> Optional[Path]:
    """Location in ``$SHARP_CACHE_DIR`` for a run, or ``None`` if caching is off."""
    root = os.environ.get("SHARP_CACHE_DIR")
    if not root:
        return None
    d, n, fp = report_key
    return Path(root) / f"{backend}-d{d}-n{n}-{fp}.json"


def manifest_json(m: RunManifest) -> str:
    return json.dumps(asdict(m), indent=1, sort_keys=True) + "\n"


def timed(fn, *args, **kwargs):
    t = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t
