"""Constructions of new sharp polynomials from known ones.

* even degrees: glue two odd-degree sharp polynomials together;
* odd degrees: trade a block ``c x^j y^k f~_m`` of ``f`` for ``c x^j y^k (1 + y^m)``,
  which is the same on the line because ``f_m = f~_m - y^m`` equals 1 there.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import cached_property, lru_cache
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .exactpoly import (
    BivariatePoly,
    Monomial,
    Y,
    canonical_form,
    invariant_even,
    invariant_sharp,
    is_member,
    swap_vars,
)
from .nullsearch import sharp_term_count
from .report import swap_closure

__all__ = [
    "CompositionCollision",
    "compose_even",
    "even_closure",
    "SubstitutionParams",
    "Candidate",
    "substitute",
    "substitution_grid",
    "ScanRecord",
    "scan_degree",
    "scan_uniqueness",
    "pell_degrees",
    "pell_by_recurrence",
    "nonunique_clauses",
    "KNOWN_UNIQUE",
]

#: odd degrees where f_d is the only sharp polynomial up to swap
KNOWN_UNIQUE = (1, 3, 5, 9, 17)


class CompositionCollision(ValueError):
    """``y^d1 * q`` shares a monomial with the rest of ``p``."""


def _require_sharp_odd(p: BivariatePoly, name: str) -> int:
    d = p.degree
    if d == float("-inf") or d % 2 == 0:
        raise ValueError(f"{name} must have odd degree, got {d}")
    if not is_member(p, d):
        raise ValueError(f"{name} = {p} is not in H(2,{d})")
    if p.term_count != sharp_term_count(d):
        raise ValueError(f"{name} has {p.term_count} terms, sharp degree {d} needs {sharp_term_count(d)}")
    if p.coeff(d, 0) != 1 or p.coeff(0, d) != 1:
        raise ValueError(f"{name} does not have the form x^{d} + y^{d} + lower terms")
    return d


def compose_even(p: BivariatePoly, q: BivariatePoly) -> BivariatePoly:
    """``x^d1 + y^d1 * q + p0`` where ``p = x^d1 + y^d1 + p0``; sharp of degree ``d1 + d2``."""
    d1 = _require_sharp_odd(p, "p")
    d2 = _require_sharp_odd(q, "q")
    p0 = BivariatePoly._trusted({m: c for m, c in p.terms.items() if m not in ((d1, 0), (0, d1))})
    tail = q.shift(0, d1)
    clash = tail.support & (p0.support | {Monomial(d1, 0)})
    if clash:
        raise CompositionCollision(f"y^{d1} * q meets p at {sorted(clash)}")
    f = BivariatePoly.monomial(d1, 0) + tail + p0
    d = d1 + d2
    if not is_member(f, d) or f.term_count != sharp_term_count(d):
        raise AssertionError(f"composition {f} is not sharp of degree {d}")
    return f


def even_closure(d: int, sharp_by_degree: Dict[int, Sequence[BivariatePoly]]) -> List[BivariatePoly]:
    """All compositions of raw odd-degree sharp lists with degrees summing to ``d``, swaps included."""
    out = []
    for d1 in range(1, d, 2):
        d2 = d - d1
        for p in sharp_by_degree[d1]:
            for q in sharp_by_degree[d2]:
                out.append(compose_even(p, q))
    return swap_closure(out)


@dataclass(frozen=True)
class SubstitutionParams:
    m: int
    j: int
    k: int
    c: Fraction

    def __post_init__(self) -> None:
        if self.m < 2 or self.m % 2:
            raise ValueError(f"m must be even and >= 2, got {self.m}")
        if self.j < 0 or self.k < 0:
            raise ValueError("negative shift")
        if self.c < 0:
            raise ValueError("c must be nonnegative")


@dataclass(frozen=True)
class Candidate:
    params: SubstitutionParams
    source: BivariatePoly
    accepted: bool
    reason: str = ""

    @cached_property
    def poly(self) -> BivariatePoly:
        p = self.params
        return self.source - BivariatePoly._trusted(dict(_block(p.m))).shift(p.j, p.k, p.c)


def substitute(f: BivariatePoly, params: SubstitutionParams, d: Optional[int] = None) -> Candidate:
    """``f - c x^j y^k (f_m - 1)``; accepted when nonnegative, of degree ``d``, with as many terms as ``f``."""
    d = f.degree if d is None else d
    if params.m >= d or params.j + params.k + params.m > d:
        raise ValueError(f"parameters {params} do not fit degree {d}")
    # only the shifted block moves, so every check reads those coefficients alone
    j, k, c = params.j, params.k, params.c
    terms = f.terms
    touched = {}
    for (a, b), v in _block(params.m):
        mon = Monomial(a + j, b + k)
        w = terms.get(mon, 0) - c * v
        if w < 0:
            return Candidate(params, f, False, f"negative coefficient at {tuple(mon)}")
        touched[mon] = w
    if not any(sum(mon) == d and touched.get(mon, 1) != 0 for mon in terms) and \
            not any(sum(mon) == d and v != 0 for mon, v in touched.items()):
        return Candidate(params, f, False, "degree dropped")
    n = f.term_count + sum((v != 0) - (mon in terms) for mon, v in touched.items())
    if n != f.term_count:
        return Candidate(params, f, False, f"{n} terms, expected {f.term_count}")
    return Candidate(params, f, True)


@lru_cache(maxsize=None)
def _block(m: int) -> Tuple[Tuple[Monomial, Fraction], ...]:
    return tuple((mon, v) for mon, v in (invariant_even(m) - 1).terms.items())


@lru_cache(maxsize=None)
def _tilde(m: int) -> BivariatePoly:
    return invariant_even(m) + Y ** m


def substitution_grid(f: BivariatePoly, d: int, anchored: bool = True) -> Iterable[SubstitutionParams]:
    """Candidate parameters in a deterministic order.

    For each even ``m`` and shift ``(j, k)``, ``c`` ranges over the ratios
    ``coeff(f, shifted term) / coeff(f~_m, term)`` that make one cancellation
    exact.  With ``anchored`` only shifts whose image of ``f~_m`` lies inside
    the support of ``f`` are kept; every other shift leaves a negative term.
    """
    supp = f.support
    for m in range(2, d, 2):
        ft = _tilde(m)
        tterms = ft.sorted_terms()
        if anchored:
            # f~_m always contains x^m; anchor it on each support monomial
            shifts = sorted({(a - m, b) for a, b in supp if a >= m and a - m + b + m <= d})
        else:
            shifts = [(j, k) for j in range(d - m + 1) for k in range(d - m - j + 1)]
        for j, k in shifts:
            if anchored and any(Monomial(a + j, b + k) not in supp for (a, b), _ in tterms):
                continue
            ratios = set()
            for (a, b), c in tterms:
                v = f.coeff(a + j, b + k)
                if v > 0:
                    ratios.add(v / c)
            for c in sorted(ratios):
                yield SubstitutionParams(m, j, k, c)


@dataclass
class ScanRecord:
    degree: int
    found_noninvariant: bool
    params: Optional[Tuple[SubstitutionParams, ...]] = None
    polynomial: Optional[BivariatePoly] = None
    accepted: int = 0

    def to_json(self) -> dict:
        out = {"degree": self.degree, "found_noninvariant": self.found_noninvariant, "accepted": self.accepted}
        if self.params is not None:
            out["params"] = [
                {"m": p.m, "j": p.j, "k": p.k, "c": str(p.c)} for p in self.params
            ]
            out["polynomial"] = str(self.polynomial)
        return out


def _accepted_from(f: BivariatePoly, d: int, anchored: bool) -> List[Candidate]:
    return [cand for params in substitution_grid(f, d, anchored)
            if (cand := substitute(f, params, d)).accepted]


def scan_degree(d: int, depth: int = 1, anchored: bool = True) -> ScanRecord:
    """Apply up to ``depth`` rounds of substitutions starting from ``f_d``."""
    if d % 2 == 0 or d < 1:
        raise ValueError("the scan runs on odd degrees only")
    fd = invariant_sharp(d)
    base = canonical_form(fd)
    frontier: List[Tuple[BivariatePoly, Tuple[SubstitutionParams, ...]]] = [(fd, ())]
    seen = {base}
    first: Optional[Tuple[BivariatePoly, Tuple[SubstitutionParams, ...]]] = None
    total = 0
    for _ in range(depth):
        nxt = []
        for f, trail in frontier:
            for cand in _accepted_from(f, d, anchored):
                total += 1
                key = canonical_form(cand.poly)
                if key in seen:
                    continue
                seen.add(key)
                path = trail + (cand.params,)
                nxt.append((cand.poly, path))
                if first is None:
                    first = (cand.poly, path)
        frontier = nxt
        if not frontier:
            break
    if first is None:
        return ScanRecord(d, False, accepted=total)
    return ScanRecord(d, True, first[1], first[0], accepted=total)


def _scan_one(args) -> ScanRecord:
    return scan_degree(*args)


def scan_uniqueness(degrees: Iterable[int], depth: int = 1, jobs: int = 1, anchored: bool = True) -> List[ScanRecord]:
    ds = sorted(set(degrees))
    args = [(d, depth, anchored) for d in ds]
    if jobs > 1 and len(ds) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_scan_one, args))
    return [_scan_one(a) for a in args]


def pell_degrees(count: int) -> List[int]:
    """``((7 + 4 sqrt3)^k + (7 - 4 sqrt3)^k) / 2`` for ``k = 1..count``, in exact ``a + b sqrt3`` arithmetic."""
    if count < 1:
        raise ValueError("count must be positive")
    out = []
    a, b = 1, 0
    for _ in range(count):
        a, b = 7 * a + 12 * b, 4 * a + 7 * b
        # the conjugates sum to 2a
        out.append(a)
    return out


def pell_by_recurrence(count: int) -> List[int]:
    seq = [1, 7]
    while len(seq) < count + 1:
        seq.append(14 * seq[-1] - seq[-2])
    return seq[1:count + 1]


def nonunique_clauses(d_max: int) -> Dict[int, Set[str]]:
    """For each ``1 <= d <= d_max``, the clauses predicting that uniqueness fails.

    ``"i"`` even degree, ``"ii"`` ``d = 3 mod 4`` with ``d >= 7``, ``"iii"``
    a Pell degree, ``"iv"`` ``d = 1 mod 6`` with ``d > 1``.
    """
    pell: Set[int] = set()
    k = 1
    while True:
        v = pell_degrees(k)[-1]
        if v > d_max:
            break
        pell.add(v)
        k += 1
    out: Dict[int, Set[str]] = {}
    for d in range(1, d_max + 1):
        s = set()
        if d % 2 == 0:
            s.add("i")
        if d % 4 == 3 and d >= 7:
            s.add("ii")
        if d in pell:
            s.add("iii")
        if d % 6 == 1 and d > 1:
            s.add("iv")
        out[d] = s
    return out
