"""Support enumeration with a vectorized modular rank screen.

A support ``S`` can only carry a polynomial constant on the line if the
columns ``x^j (1-x)^k`` for ``(j, k)`` in ``S`` together with the constant
column are linearly dependent.  That system has the same kernel dimension
as ``A'`` (the two are related by unimodular integer changes of basis), so
full column rank mod ``p`` here is exactly the modular prefilter verdict on
``A'``.

Supports are built depth-first in lexicographic order over the candidate
pool, carrying a reduced row-echelon basis mod ``p``.  The last two picks are
screened together: with a basis ``E`` of full rank, ``E + {u, v}`` is rank
deficient iff the residues of ``u`` and ``v`` modulo ``span(E)`` are
dependent, i.e. one is zero or both normalize to the same projective point.
Only survivors reach the exact pipeline.
"""
from __future__ import annotations

import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .exactpoly import BivariatePoly, Monomial, monomial_key, monomials_of_degree, monomials_up_to
from .linalg import nullspace, rank
from .nullsearch import (
    PrefilterVerdict,
    SearchConfig,
    Status,
    analyse_support,
    build_matrix,
    check_support,
    line_column,
    modular_prefilter,
    support_submatrix,
)
from .report import FamilyWitness, SearchReport

__all__ = ["SupportSpace", "support_space", "work_units", "shard_units", "run_unit", "run_search", "iter_supports"]


def adjacent(a: Tuple[int, int], b: Tuple[int, int]) -> bool:
    """``x^k y^(m+1)`` next to ``x^(k+1) y^m``: same degree, exponents one apart."""
    return a[0] + a[1] == b[0] + b[1] and abs(a[0] - b[0]) == 1


@dataclass(frozen=True)
class SupportSpace:
    d: int
    size: int
    fixed: Tuple[Monomial, ...]
    pure_x: Tuple[Monomial, ...]
    pure_y: Tuple[Monomial, ...]
    pool: Tuple[Monomial, ...]
    need_one_of: frozenset
    need_top: bool                    # top-degree part needs both an even-j and an odd-j monomial
    no_adjacent: bool

    def bases(self) -> List[Tuple[Monomial, ...]]:
        """Fixed part of the support for each choice of pure terms, in order."""
        if not self.pure_x:
            return [self.fixed]
        return [self.fixed + (px, py) for px in self.pure_x for py in self.pure_y]


def support_space(cfg: SearchConfig) -> SupportSpace:
    d = cfg.degree
    if cfg.top_is_xd_yd:
        fixed = (Monomial(d, 0), Monomial(0, d))
        pool = [m for m in monomials_up_to(d - 1, start=2) if m.j and m.k]
        pure_x = pure_y = ()
        need_top = False
    else:
        fixed = ()
        if cfg.pure_terms:
            pure_x = tuple(Monomial(a, 0) for a in range(1, d + 1))
            pure_y = tuple(Monomial(0, b) for b in range(1, d + 1))
            pool = [m for m in monomials_up_to(d, start=2) if m.j and m.k]
        else:
            pure_x = pure_y = ()
            pool = monomials_up_to(d, start=1)
        need_top = True
    if cfg.no_even_j_degree_d_minus_1:
        pool = [m for m in pool if not (m.degree == d - 1 and m.j % 2 == 0)]
    need = frozenset(m for m in pool if m.degree == d - 1) if cfg.need_degree_d_minus_1 else frozenset()
    return SupportSpace(d, cfg.n_terms, fixed, pure_x, pure_y, tuple(pool), need, need_top, cfg.no_adjacent)


def _top_mixes_parity(support: Sequence[Monomial], d: int) -> bool:
    """The degree-``d`` part is ``(x + y) q_(d-1)``, so it vanishes at ``(1, -1)``;
    with positive coefficients that needs both parities of the x-exponent."""
    parities = {m.j % 2 for m in support if m.degree == d}
    return len(parities) == 2


def _prefix_len(r: int) -> int:
    return max(0, min(2, r - 2))


@dataclass(frozen=True)
class Unit:
    """One contiguous slice of the search: a base (fixed + pure terms) and a prefix of pool picks."""

    base_index: int
    prefix: Tuple[int, ...]


def _filtered_pool(space: SupportSpace, base: Sequence[Monomial]) -> Optional[List[Monomial]]:
    if space.no_adjacent:
        if any(adjacent(a, b) for a, b in combinations(base, 2)):
            return None
        return [m for m in space.pool if not any(adjacent(m, b) for b in base)]
    return list(space.pool)


def work_units(space: SupportSpace) -> List[Unit]:
    """Deterministic unit list; shards take contiguous ranges of it."""
    units: List[Unit] = []
    for bi, base in enumerate(space.bases()):
        pool = _filtered_pool(space, base)
        if pool is None:
            continue
        r = space.size - len(base)
        if r < 0 or r > len(pool):
            continue
        L = _prefix_len(r)
        for pre in combinations(range(len(pool)), L):
            if space.no_adjacent and any(adjacent(pool[a], pool[b]) for a, b in combinations(pre, 2)):
                continue
            units.append(Unit(bi, pre))
    return units


def shard_units(units: Sequence[Unit], shard: Tuple[int, int]) -> Sequence[Unit]:
    i, k = shard
    if not 0 <= i < k:
        raise ValueError(f"bad shard {i}/{k}")
    n = len(units)
    return units[(i * n) // k: ((i + 1) * n) // k]


# --- modular echelon ------------------------------------------------------------


class ModEchelon:
    """Reduced row-echelon basis over GF(p) for a growing set of vectors."""

    __slots__ = ("p", "basis", "pivots", "deficient", "inv")

    def __init__(self, p: int, n: int, inv: np.ndarray):
        self.p = p
        self.basis = np.zeros((0, n), dtype=np.int64)
        self.pivots: List[int] = []
        self.deficient = False
        self.inv = inv

    def reduce(self, v: np.ndarray) -> np.ndarray:
        if not self.pivots:
            return v % self.p
        return (v - v[:, self.pivots] @ self.basis) % self.p

    def extend(self, v: np.ndarray) -> "ModEchelon":
        out = ModEchelon.__new__(ModEchelon)
        out.p, out.inv = self.p, self.inv
        out.deficient = self.deficient
        w = self.reduce(v[None, :])[0]
        nz = np.flatnonzero(w)
        if nz.size == 0:
            out.basis, out.pivots, out.deficient = self.basis, self.pivots, True
            return out
        c = int(nz[0])
        w = (w * self.inv[w[c]]) % self.p
        b = (self.basis - np.outer(self.basis[:, c], w)) % self.p if self.pivots else self.basis
        out.basis = np.vstack([b, w[None, :]])
        out.pivots = self.pivots + [c]
        return out


def _inverse_table(p: int) -> np.ndarray:
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, -1, p)
    return inv


@dataclass
class UnitResult:
    raw: List[BivariatePoly] = field(default_factory=list)
    families: List[FamilyWitness] = field(default_factory=list)
    stats: Counter = field(default_factory=Counter)
    audit: List[Tuple[Tuple[Tuple[int, int], ...], int]] = field(default_factory=list)
    line_audit: List[Tuple[Tuple[int, int], ...]] = field(default_factory=list)


class _UnitRunner:
    def __init__(self, cfg: SearchConfig, space: SupportSpace, base: Tuple[Monomial, ...], pool: List[Monomial]):
        self.cfg = cfg
        self.space = space
        self.base = base
        self.pool = pool
        self.d = space.d
        self.r = space.size - len(base)
        self.rng = np.random.default_rng(cfg.seed)
        self.res = UnitResult()
        self.cols = np.array([line_column(m, self.d) for m in pool], dtype=np.int64).reshape(len(pool), self.d + 1)
        const = [0] * (self.d + 1)
        const[0] = -1
        self.base_cols = [line_column(m, self.d) for m in base] + [const]
        n = len(pool)
        self.adj = np.zeros((n, n), dtype=bool)
        if space.no_adjacent:
            for a in range(n):
                for b in range(a + 1, n):
                    if adjacent(pool[a], pool[b]):
                        self.adj[a, b] = self.adj[b, a] = True
        self.in_need = np.array([m in space.need_one_of for m in pool], dtype=bool)
        self.top_even = np.array([m.degree == self.d and m.j % 2 == 0 for m in pool], dtype=bool)
        self.top_odd = np.array([m.degree == self.d and m.j % 2 == 1 for m in pool], dtype=bool)
        self.base_has_need = not space.need_one_of or any(m in space.need_one_of for m in base)
        self.base_even = not space.need_top or any(m.degree == self.d and m.j % 2 == 0 for m in base)
        self.base_odd = not space.need_top or any(m.degree == self.d and m.j % 2 == 1 for m in base)
        self.triu = np.triu(np.ones((n, n), dtype=bool), k=1)
        self._tables: Dict[int, np.ndarray] = {}
        self._base_echelons: Dict[int, ModEchelon] = {}
        self.weights = np.random.default_rng(12345).integers(1, 2 ** 40, size=self.d + 1, dtype=np.int64)

    # -- helpers -------------------------------------------------------------
    def _inv(self, p: int) -> np.ndarray:
        if p not in self._tables:
            self._tables[p] = _inverse_table(p)
        return self._tables[p]

    def _echelon(self, p: int, picks: Sequence[int]) -> ModEchelon:
        e = self._base_echelons.get(p)
        if e is None:
            e = ModEchelon(p, self.d + 1, self._inv(p))
            for col in self.base_cols:
                e = e.extend(np.array(col, dtype=np.int64) % p)
            self._base_echelons[p] = e
        for i in picks:
            e = e.extend(self.cols[i] % p)
        return e

    def _exactly_deficient(self, picks: Sequence[int]) -> bool:
        vecs = list(self.base_cols) + [self.cols[i].tolist() for i in picks]
        return rank(vecs) < len(vecs)

    def _support(self, picks: Sequence[int]) -> Tuple[Monomial, ...]:
        return tuple(sorted(self.base + tuple(self.pool[i] for i in picks), key=monomial_key))

    def _settle(self, picks: Sequence[int]) -> Optional[ModEchelon]:
        """Echelon for ``picks`` under the first prime that keeps it full rank.

        Returns ``None`` when the subtree can be dropped (exact kernel in
        sharp mode: every completion keeps that kernel vector, which is zero
        on the extra monomials).
        """
        if self._exactly_deficient(picks):
            if not self.cfg.allow_families:
                self.res.stats["pruned_subtrees"] += 1
                return None
            e = self._echelon(self.cfg.primes[0], picks)
            e.deficient = True
            return e
        for p in self.cfg.primes:
            e = self._echelon(p, picks)
            if not e.deficient:
                return e
        return e

    def _line_verdict(self, picks: Sequence[int]) -> Optional[Status]:
        """Cheap exact verdict from the line system, whose kernel is the coefficient vector.

        Returns a rejection status, or ``None`` when the support needs the
        full pipeline (a positive one-dimensional kernel, or a family candidate).
        """
        vecs = list(self.base_cols[:-1]) + [self.cols[i].tolist() for i in picks] + [self.base_cols[-1]]
        rows = [[v[t] for v in vecs] for t in range(self.d + 1)]
        kernel = nullspace(rows, cols=len(vecs))
        if not kernel:
            return Status.REJECTED_NULLSPACE_DIM0
        if len(kernel) > 1:
            return None if self.cfg.allow_families else Status.REJECTED_NULLSPACE_DIM_HIGH
        v = kernel[0]
        lam = v[-1]
        if lam == 0 or any(c * lam < 0 for c in v[:-1]):
            return Status.REJECTED_NEGATIVITY
        if any(c == 0 for c in v[:-1]):
            return Status.REJECTED_SUPPORT_MISMATCH
        return None

    def _exact(self, picks: Sequence[int]) -> None:
        support = self._support(picks)
        self.res.stats["exact_checks"] += 1
        verdict = self._line_verdict(picks)
        if verdict is not None:
            self.res.stats[verdict.value] += 1
            if len(self.res.line_audit) < self.cfg.audit_per_unit and self.rng.random() < self.cfg.audit_rate:
                self.res.line_audit.append(tuple(tuple(m) for m in support))
            return
        fn = analyse_support if self.cfg.allow_families else check_support
        out = fn(self.d, support, self.cfg.primes)
        self.res.stats[out.status.value] += 1
        if out.accepted:
            self.res.raw.append(out.poly)
        elif out.family is not None:
            self.res.families.append(out.family)
            self.res.stats["families"] += 1

    # -- search --------------------------------------------------------------
    def run(self, prefix: Tuple[int, ...], rng: np.random.Generator) -> UnitResult:
        self.rng = rng
        self.res = UnitResult()
        r = self.r
        if r < 2:
            self._small(r)
            return self.res
        e = self._echelon(self.cfg.primes[0], prefix)
        if e.deficient:
            e = self._settle(prefix)
            if e is None:
                return self.res
        self._dfs(list(prefix), e)
        return self.res

    def _small(self, r: int) -> None:
        if r == 0:
            if self.base_has_need and self.base_even and self.base_odd:
                self.res.stats["candidates"] += 1
                self._exact(())
            return
        for i, m in enumerate(self.pool):
            if not (self.base_has_need or self.in_need[i]):
                continue
            if not (self.base_even or self.top_even[i]) or not (self.base_odd or self.top_odd[i]):
                continue
            self.res.stats["candidates"] += 1
            self._exact((i,))

    def _allowed(self, picks: Sequence[int]) -> np.ndarray:
        start = picks[-1] + 1 if picks else 0
        idx = np.arange(start, len(self.pool))
        if self.space.no_adjacent and picks:
            ok = ~self.adj[np.ix_(idx, picks)].any(axis=1)
            idx = idx[ok]
        return idx

    def _dfs(self, picks: List[int], e: ModEchelon) -> None:
        if len(picks) == self.r - 2:
            self._pairs(picks, e)
            return
        for i in self._allowed(picks):
            i = int(i)
            picks.append(i)
            child = e.extend(self.cols[i] % e.p)
            if child.deficient and not e.deficient:
                child = self._settle(picks)
            if child is not None:
                self._dfs(picks, child)
            picks.pop()

    def _pairs(self, picks: List[int], e: ModEchelon) -> None:
        idx = self._allowed(picks)
        n = idx.size
        if n < 2:
            return
        valid = self.triu[:n, :n].copy()
        if self.space.no_adjacent:
            valid &= ~self.adj[np.ix_(idx, idx)]
        chosen = picks
        if not (self.base_has_need or self.in_need[chosen].any()):
            nd = self.in_need[idx]
            valid &= nd[:, None] | nd[None, :]
        for has, mask in ((self.base_even, self.top_even), (self.base_odd, self.top_odd)):
            if not (has or mask[chosen].any()):
                tp = mask[idx]
                valid &= tp[:, None] | tp[None, :]
        count = int(np.count_nonzero(valid))
        if count == 0:
            return
        self.res.stats["candidates"] += count
        if e.deficient:
            survive = valid
        else:
            p = e.p
            res = e.reduce(self.cols[idx] % p)
            nzmask = res != 0
            zero = ~nzmask.any(axis=1)
            lead = nzmask.argmax(axis=1)
            piv = res[np.arange(n), lead]
            scale = e.inv[piv]
            normed = (res * scale[:, None]) % p
            h = normed @ self.weights
            h[zero] = -1
            same = h[:, None] == h[None, :]
            same |= zero[:, None] | zero[None, :]
            survive = valid & same
            self._sample_audit(idx, picks, valid & ~survive, p)
        ii, jj = np.nonzero(survive)
        self.res.stats["screened"] += count - ii.size
        for a, b in zip(ii.tolist(), jj.tolist()):
            self._exact(tuple(picks) + (int(idx[a]), int(idx[b])))

    def _sample_audit(self, idx: np.ndarray, picks: List[int], rejected: np.ndarray, p: int) -> None:
        cfg = self.cfg
        if cfg.audit_rate <= 0 or len(self.res.audit) >= cfg.audit_per_unit:
            return
        total = int(np.count_nonzero(rejected))
        k = int(self.rng.binomial(total, cfg.audit_rate)) if total else 0
        if not k:
            return
        flat = np.flatnonzero(rejected)
        take = self.rng.choice(flat, size=min(k, cfg.audit_per_unit - len(self.res.audit)), replace=False)
        n = idx.size
        for t in sorted(take.tolist()):
            a, b = divmod(t, n)
            sup = self._support(tuple(picks) + (int(idx[a]), int(idx[b])))
            self.res.audit.append((tuple(tuple(m) for m in sup), p))


_RUNNERS: Dict[Tuple[SearchConfig, int], _UnitRunner] = {}


def run_unit(cfg: SearchConfig, space: SupportSpace, unit_pos: int, unit: Unit) -> UnitResult:
    key = (cfg, unit.base_index)
    runner = _RUNNERS.get(key)
    if runner is None:
        if len(_RUNNERS) > 256:
            _RUNNERS.clear()
        base = space.bases()[unit.base_index]
        runner = _RUNNERS[key] = _UnitRunner(cfg, space, base, _filtered_pool(space, base))
    return runner.run(unit.prefix, np.random.default_rng([cfg.seed, unit_pos]))


def _run_chunk(args) -> List[UnitResult]:
    cfg, space, chunk = args
    return [run_unit(cfg, space, pos, u) for pos, u in chunk]


def audit_prefilter(d: int, samples: Sequence[Tuple[Tuple[Tuple[int, int], ...], int]]) -> int:
    """Re-check screened-out supports: prefilter on A' and exact kernel must agree."""
    a = build_matrix(d)
    for support, p in samples:
        sub = support_submatrix(a, support, d)
        if modular_prefilter(sub, p) is not PrefilterVerdict.TRIVIAL_KERNEL:
            raise AssertionError(f"screen and A' prefilter disagree on {support} mod {p}")
        if nullspace(sub):
            raise AssertionError(f"prefilter rejected {support} but the exact kernel is nontrivial")
    return len(samples)


def audit_line_rejections(d: int, supports: Sequence[Tuple[Tuple[int, int], ...]]) -> int:
    """Supports rejected from the line system must also be rejected by ``check_support``."""
    for support in supports:
        if check_support(d, support).accepted:
            raise AssertionError(f"line system rejected {support} but the full pipeline accepts it")
    return len(supports)


def run_search(cfg: SearchConfig, shard: Tuple[int, int] = (0, 1), jobs: int = 1, backend: str = "nullspace") -> SearchReport:
    t0 = time.perf_counter()
    space = support_space(cfg)
    units = work_units(space)
    lo = (shard[0] * len(units)) // shard[1]
    mine = list(enumerate(shard_units(units, shard), start=lo))
    results: List[UnitResult] = []
    if jobs > 1 and len(mine) > 1:
        step = max(1, len(mine) // (jobs * 8))
        chunks = [(cfg, space, mine[i:i + step]) for i in range(0, len(mine), step)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_run_chunk, chunks):
                results.extend(part)
    else:
        results = [run_unit(cfg, space, pos, u) for pos, u in mine]
    t1 = time.perf_counter()
    stats: Counter = Counter()
    raw: List[BivariatePoly] = []
    fams: List[FamilyWitness] = []
    audit: List = []
    line_audit: List = []
    for r in results:
        stats.update(r.stats)
        raw.extend(r.raw)
        fams.extend(r.families)
        audit.extend(r.audit)
        line_audit.extend(r.line_audit)
    stats["line_audited"] = audit_line_rejections(cfg.degree, line_audit[: cfg.audit_cap])
    if len(audit) > cfg.audit_cap:
        keep = np.random.default_rng([cfg.seed, len(audit)]).choice(len(audit), size=cfg.audit_cap, replace=False)
        audit = [audit[i] for i in sorted(keep.tolist())]
    stats["audited"] = audit_prefilter(cfg.degree, audit)
    stats["units"] = len(mine)
    t2 = time.perf_counter()
    return SearchReport(
        degree=cfg.degree,
        n_terms=cfg.n_terms,
        backend=backend,
        flags=cfg.flags(),
        raw=raw,
        families=fams,
        stats=dict(sorted(stats.items())),
        timing={"search_s": t1 - t0, "audit_s": t2 - t1},
        shards=[{"index": shard[0], "count": shard[1], "units": len(mine), "total_units": len(units)}],
    )


def iter_supports(cfg: SearchConfig) -> Iterator[Tuple[Monomial, ...]]:
    """Every candidate support of the configured space, unscreened (small cases only)."""
    space = support_space(cfg)
    for base in space.bases():
        pool = _filtered_pool(space, base)
        if pool is None:
            continue
        r = space.size - len(base)
        if r < 0:
            continue
        for picks in combinations(pool, r):
            sup = tuple(base) + picks
            if space.no_adjacent and any(adjacent(a, b) for a, b in combinations(picks, 2)):
                continue
            if space.need_one_of and not any(m in space.need_one_of for m in sup):
                continue
            if space.need_top and not _top_mixes_parity(sup, space.d):
                continue
            yield tuple(sorted(sup, key=monomial_key))
