"""Mixed 0-1 feasibility backend: exact LP relaxations inside a branch-and-bound.

Each admissible monomial gets a coefficient ``c`` and an indicator ``b``.
The coefficients satisfy the linear system coming from ``p(x, 1-x) = 1``
and the bounds ``0 <= c <= M * b``.  The LP relaxation used at a node works
with ``z = c / M`` only: fixing ``b = 0`` pins ``z = 0``, and the relaxed
indicators are projected out, leaving the implied rows

* ``sum of free z <= N - (#fixed ones)``  (cardinality),
* ``sum of free pure-x z <= 1`` and the same for y  (even degree),
* the swap-symmetry row ``sum_{j<k} c - sum_{j>k} c <= 0``.

Adjacency exclusions and "at least one of" rules are enforced by
propagation on the indicators rather than as LP rows; either way the
relaxation stays valid, so an infeasible LP is a sound pruning certificate.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .enumeration import adjacent
from .exactpoly import BivariatePoly, Monomial, monomial_key, monomials_up_to
from .linalg import fraction_free_reduce, primitive
from .nullsearch import check_support, line_column, sharp_term_count
from .report import SearchReport, swap_closure
from .simplex import DEFAULT_PIVOT_BUDGET, feasible_point

__all__ = [
    "BOUND_RULES",
    "coefficient_bound",
    "bound_violations",
    "MipModel",
    "BranchNode",
    "LpOutcome",
    "build_model",
    "lp_feasible",
    "enumerate_feasible",
    "mip_search",
]

FREE = None
SHARD_SPLIT_DEPTH = 8


def _bound_literal(j: int, k: int, d: int) -> Fraction:
    e = d - j - k
    return min(Fraction(comb(d, m), comb(e, m)) for m in range(e + 1))


def _bound_shifted(j: int, k: int, d: int) -> Fraction:
    # x^j y^k (x+y)^e contributes binom(e, m) to x^(j+m) y^(k+e-m) of (x+y)^d
    e = d - j - k
    return min(Fraction(comb(d, j + m), comb(e, m)) for m in range(e + 1))


def _bound_weak(j: int, k: int, d: int) -> Fraction:
    return Fraction(min(comb(d, j), comb(d, k)))


BOUND_RULES = {"weak": _bound_weak, "shifted": _bound_shifted, "literal": _bound_literal}


def coefficient_bound(j: int, k: int, d: int, rule: str = "weak") -> Fraction:
    """Upper bound on the coefficient of ``x^j y^k`` in any member of H(2,d)."""
    return BOUND_RULES[rule](j, k, d)


def bound_violations(polys: Sequence[Tuple[int, BivariatePoly]], rule: str) -> List[Tuple[int, Monomial, Fraction, Fraction]]:
    """Every (degree, monomial, coefficient, bound) where ``rule`` is violated."""
    out = []
    for d, p in polys:
        for m, c in p.sorted_terms():
            b = coefficient_bound(m.j, m.k, d, rule)
            if c > b:
                out.append((d, m, c, b))
    return out


@dataclass(frozen=True)
class MipModel:
    degree: int
    n_terms: int
    odd_constraints: bool
    bound_rule: str
    monomials: Tuple[Monomial, ...]          # variables, in monomial order
    fixed: Tuple[Monomial, ...]              # coefficient-1, indicator-1 constants
    bounds: Tuple[Fraction, ...]
    eq_rows: Tuple[Tuple[Tuple[Fraction, ...], Fraction], ...]
    symmetry: Tuple[Fraction, ...]
    pure_x: Tuple[int, ...] = ()
    pure_y: Tuple[int, ...] = ()
    neighbours: Tuple[Tuple[int, ...], ...] = ()
    need_one_of: Tuple[int, ...] = ()
    need_top: Tuple[Tuple[int, ...], ...] = ()   # degree-d variables with even j, then odd j

    @property
    def n(self) -> int:
        return len(self.monomials)

    @property
    def slots(self) -> int:
        """Number of indicator-1 variables a leaf must have."""
        return self.n_terms - len(self.fixed)

    def flags(self) -> Dict[str, object]:
        return {
            "degree": self.degree,
            "n_terms": self.n_terms,
            "odd_constraints": self.odd_constraints,
            "bound": self.bound_rule,
            "no_adjacent": bool(any(self.neighbours)),
            "symmetry": True,
        }


def _plain(v: Fraction):
    # integral entries stay Python ints so the simplex skips rational scaling
    return int(v) if v.denominator == 1 else v


def build_model(d: int, odd_constraints: Optional[bool] = None, bound: str = "weak", n_terms: Optional[int] = None) -> MipModel:
    """Model for sharp polynomials of degree ``d`` (same constraint set as the support search)."""
    if d < 1:
        raise ValueError("degree must be positive")
    odd = d % 2 == 1
    if odd_constraints is None:
        odd_constraints = odd
    if odd_constraints and not odd:
        raise ValueError("the odd-degree constraints need odd d")
    n = sharp_term_count(d) if n_terms is None else n_terms
    if odd_constraints:
        fixed = (Monomial(d, 0), Monomial(0, d))
        mons = [m for m in monomials_up_to(d - 1, start=2) if m.j and m.k]
        if d > 1:
            mons = [m for m in mons if not (m.degree == d - 1 and m.j % 2 == 0)]
    else:
        fixed = ()
        mons = [m for m in monomials_up_to(d, start=1)]
    mons.sort(key=monomial_key)
    mons_t = tuple(mons)
    bounds = tuple(coefficient_bound(m.j, m.k, d, bound) for m in mons_t)
    cols = [line_column(m, d) for m in mons_t]
    fixed_cols = [line_column(m, d) for m in fixed]
    eq_rows = []
    for t in range(d + 1):
        coeffs = tuple(_plain(bounds[i] * cols[i][t]) for i in range(len(mons_t)))
        rhs = (1 if t == 0 else 0) - sum(fc[t] for fc in fixed_cols)
        eq_rows.append((coeffs, rhs))
    symmetry = tuple(_plain(bounds[i] * (1 if m.j < m.k else -1 if m.j > m.k else 0)) for i, m in enumerate(mons_t))
    pure_x = tuple(i for i, m in enumerate(mons_t) if m.k == 0)
    pure_y = tuple(i for i, m in enumerate(mons_t) if m.j == 0)
    use_adj = odd_constraints and d > 1
    neighbours = tuple(
        tuple(b for b in range(len(mons_t)) if b != a and use_adj and adjacent(mons_t[a], mons_t[b]))
        for a in range(len(mons_t))
    )
    need = tuple(i for i, m in enumerate(mons_t) if m.degree == d - 1) if (odd_constraints and d > 1) else ()
    top = ()
    if not odd_constraints:
        # the degree-d part is a multiple of x + y, so it vanishes at (1, -1)
        top = tuple(tuple(i for i, m in enumerate(mons_t) if m.degree == d and m.j % 2 == par) for par in (0, 1))
    return MipModel(d, n, odd_constraints, bound, mons_t, fixed, bounds, tuple(eq_rows), symmetry,
                    pure_x if not odd_constraints else (), pure_y if not odd_constraints else (),
                    neighbours, need, top)


@dataclass(frozen=True)
class BranchNode:
    """Indicator assignment: 1, 0 or ``None`` (free) per model variable."""

    state: Tuple[Optional[int], ...]
    depth: int = 0

    @classmethod
    def root(cls, model: MipModel) -> "BranchNode":
        return cls((FREE,) * model.n)

    def ones(self) -> List[int]:
        return [i for i, s in enumerate(self.state) if s == 1]

    def free(self) -> List[int]:
        return [i for i, s in enumerate(self.state) if s is FREE]

    def fix(self, i: int, value: int) -> "BranchNode":
        st = list(self.state)
        st[i] = value
        return BranchNode(tuple(st), self.depth + 1)


@dataclass
class LpOutcome:
    feasible: bool
    witness: Optional[Dict[Monomial, Fraction]]
    pivots: int
    point: Optional[List[Fraction]] = None


def _propagate(model: MipModel, node: BranchNode) -> Optional[BranchNode]:
    """Apply forced indicator values; ``None`` if the node is combinatorially dead."""
    st = list(node.state)
    changed = True
    while changed:
        changed = False
        ones = [i for i, s in enumerate(st) if s == 1]
        for i in ones:
            for nb in model.neighbours[i]:
                if st[nb] == 1:
                    return None
                if st[nb] is FREE:
                    st[nb] = 0
                    changed = True
        for group in (model.pure_x, model.pure_y):
            if not group:
                continue
            g1 = [i for i in group if st[i] == 1]
            if len(g1) > 1:
                return None
            gf = [i for i in group if st[i] is FREE]
            if g1:
                for i in gf:
                    st[i] = 0
                    changed = True
            elif not gf:
                return None
            elif len(gf) == 1:
                st[gf[0]] = 1
                changed = True
        n1 = sum(1 for s in st if s == 1)
        nf = sum(1 for s in st if s is FREE)
        if n1 > model.slots or n1 + nf < model.slots:
            return None
        if n1 == model.slots and nf:
            st = [0 if s is FREE else s for s in st]
            changed = True
        elif n1 + nf == model.slots and nf:
            st = [1 if s is FREE else s for s in st]
            changed = True
        for req in (model.need_one_of, *model.need_top):
            if not req or any(st[i] == 1 for i in req):
                continue
            open_ = [i for i in req if st[i] is FREE]
            if not open_:
                return None
            if len(open_) == 1:
                st[open_[0]] = 1
                changed = True
    return BranchNode(tuple(st), node.depth)


def _lp_rows(model: MipModel, node: BranchNode):
    active = [i for i, s in enumerate(node.state) if s != 0]
    eq = [([c[i] for i in active], rhs) for c, rhs in model.eq_rows]
    free = [i for i in active if node.state[i] is FREE]
    ones = len(active) - len(free)
    le = []
    if free:
        fs = set(free)
        le.append(([1 if i in fs else 0 for i in active], model.slots - ones))
        for group in (model.pure_x, model.pure_y):
            gf = {i for i in group if node.state[i] is FREE}
            if len(gf) > 1:
                le.append(([1 if i in gf else 0 for i in active], 1))
    le.append(([model.symmetry[i] for i in active], 0))
    return active, eq, le


def _satisfies(model: MipModel, node: BranchNode, point: Sequence[Fraction]) -> bool:
    """Does a full-length z vector satisfy the LP relaxation at ``node``?"""
    for i, s in enumerate(node.state):
        if s == 0 and point[i] != 0:
            return False
    free = [i for i, s in enumerate(node.state) if s is FREE]
    ones = sum(1 for s in node.state if s == 1)
    if free and sum(point[i] for i in free) > model.slots - ones:
        return False
    for group in (model.pure_x, model.pure_y):
        gf = [i for i in group if node.state[i] is FREE]
        if len(gf) > 1 and sum(point[i] for i in gf) > 1:
            return False
    return True


def lp_feasible(model: MipModel, node: BranchNode, pivot_budget: int = DEFAULT_PIVOT_BUDGET) -> LpOutcome:
    """Exact phase-I simplex on the relaxation at ``node``."""
    active, eq, le = _lp_rows(model, node)
    res = feasible_point(len(active), eq=eq, le=le, upper=[1] * len(active), pivot_budget=pivot_budget)
    if not res.feasible:
        return LpOutcome(False, None, res.pivots)
    point = [Fraction(0)] * model.n
    for i, v in zip(active, res.point):
        point[i] = v
    witness = {m: Fraction(1) for m in model.fixed}
    for i, v in enumerate(point):
        if v:
            witness[model.monomials[i]] = v * model.bounds[i]
    return LpOutcome(True, witness, res.pivots, point)


@dataclass
class MipStats:
    nodes: int = 0
    lp_solves: int = 0
    lp_reused: int = 0
    lp_pruned: int = 0
    combinatorial_pruned: int = 0
    leaves: int = 0
    accepted: int = 0
    max_pivots: int = 0
    total_pivots: int = 0

    def merge(self, other: "MipStats") -> None:
        for k, v in vars(other).items():
            if k == "max_pivots":
                self.max_pivots = max(self.max_pivots, v)
            else:
                setattr(self, k, getattr(self, k) + v)


@dataclass
class _Found:
    supports: List[Tuple[Monomial, ...]] = field(default_factory=list)
    polys: List[BivariatePoly] = field(default_factory=list)
    stats: MipStats = field(default_factory=MipStats)


class _Search:
    def __init__(self, model: MipModel, pivot_budget: int):
        self.model = model
        self.budget = pivot_budget
        self.out = _Found()
        self.columns = [line_column(m, model.degree) for m in model.monomials]
        self.tiers = [set(model.pure_x) | set(model.pure_y), {i for g in model.need_top for i in g}]

    def solve(self, node: BranchNode, hint: Optional[List[Fraction]]) -> Optional[List[Fraction]]:
        st = self.out.stats
        if hint is not None and _satisfies(self.model, node, hint):
            st.lp_reused += 1
            return hint
        res = lp_feasible(self.model, node, self.budget)
        st.lp_solves += 1
        st.total_pivots += res.pivots
        st.max_pivots = max(st.max_pivots, res.pivots)
        if not res.feasible:
            st.lp_pruned += 1
            return None
        return res.point

    def leaf(self, node: BranchNode) -> None:
        st = self.out.stats
        st.leaves += 1
        support = tuple(sorted(self.model.fixed + tuple(self.model.monomials[i] for i in node.ones()), key=monomial_key))
        res = check_support(self.model.degree, support)
        if res.accepted:
            st.accepted += 1
            self.out.supports.append(support)
            self.out.polys.append(res.poly)

    def expand(self, node: BranchNode, hint: Optional[List[Fraction]]) -> Optional[Tuple[BranchNode, List[Fraction]]]:
        """Propagate and solve; returns the live node and its LP point."""
        self.out.stats.nodes += 1
        node = _propagate(self.model, node)
        if node is None:
            self.out.stats.combinatorial_pruned += 1
            return None
        if node.free() and self.model.slots - len(node.ones()) <= 2:
            # closing the last slots exactly is cheaper than the relaxation here
            return node, hint or []
        point = self.solve(node, hint)
        if point is None:
            return None
        return node, point

    def terminal(self, node: BranchNode) -> bool:
        """Finish ``node`` without branching if it is at most two slots from the leaves."""
        if not node.free():
            self.leaf(node)
            return True
        left = self.model.slots - len(node.ones())
        if left == 1:
            self.close_last_slot(node)
            return True
        if left == 2:
            self.close_two_slots(node)
            return True
        return False

    def _open_candidates(self, node: BranchNode) -> Tuple[List[int], List[Tuple[int, ...]]]:
        """Free variables still usable and the requirement groups not yet met."""
        model = self.model
        unmet = [g for g in (model.pure_x, model.pure_y, model.need_one_of, *model.need_top)
                 if g and not any(node.state[i] == 1 for i in g)]
        return node.free(), unmet

    def _eliminate(self, node: BranchNode):
        """Reduce the line system on the columns already switched on.

        Returns ``(transform, rhs, det, m)`` with ``transform`` the integer row
        operations, or ``None`` when those columns are dependent (every
        completion then has a kernel of dimension >= 2).
        """
        d = self.model.degree
        base = [line_column(m, d) for m in self.model.fixed] + [self.columns[i] for i in node.ones()]
        m = len(base)
        # [B | e0 | I] reduced on B's columns: the identity block records the row transform
        aug = [[base[c][t] for c in range(m)] + [1 if t == 0 else 0] + [1 if u == t else 0 for u in range(d + 1)]
               for t in range(d + 1)]
        aug, pivots, det = fraction_free_reduce(aug, pivot_cols=m)
        if len(pivots) < m:
            return None
        return [row[m + 1:] for row in aug], [row[m] for row in aug], det, m

    def _finish(self, node: BranchNode, picks: Sequence[int], weights: Sequence[Fraction], top, rhs, det) -> None:
        """Positivity and symmetry for an exact solution, then the leaf check."""
        st = self.out.stats
        model = self.model
        if any(w <= 0 for w in weights):
            st.lp_pruned += 1
            return
        m = len(top[0])
        coeffs = [(rhs[r] - sum(tp[r] * w for tp, w in zip(top, weights))) / det for r in range(m)]
        if any(c <= 0 for c in coeffs):
            st.lp_pruned += 1
            return
        mons = list(model.fixed) + [model.monomials[i] for i in node.ones()] + [model.monomials[i] for i in picks]
        sym = sum(((x.j < x.k) - (x.j > x.k)) * c for x, c in zip(mons, coeffs + list(weights)))
        if sym > 0:
            st.lp_pruned += 1
            return
        leaf = node
        for i in picks:
            leaf = leaf.fix(i, 1)
        self.leaf(leaf)

    def close_last_slot(self, node: BranchNode) -> None:
        """One indicator left to switch on: try each free variable on the exact line system.

        Equivalent to branching down to every leaf below ``node``: a leaf is
        kept when propagation allows it, its coefficients are the unique
        positive solution, and that solution satisfies the symmetry row.
        The columns already fixed are eliminated once; each candidate column
        then costs one transform and a consistency check.
        """
        st = self.out.stats
        # propagation has already cleared neighbours of the ones and full pure groups,
        # so the last pick only has to meet every requirement group still unmet
        free, unmet = self._open_candidates(node)
        allowed = set(free)
        for group in unmet:
            allowed &= set(group)
        st.combinatorial_pruned += len(free) - len(allowed)
        if not allowed:
            return
        red = self._eliminate(node)
        if red is None:
            st.lp_pruned += len(allowed)
            return
        transform, rhs, det, m = red
        d = self.model.degree
        for f in sorted(allowed):
            st.nodes += 1
            col = self.columns[f]
            tail = [sum(w * v for w, v in zip(transform[r], col)) for r in range(m, d + 1)]
            lead = next((r for r, v in enumerate(tail) if v), None)
            if lead is None:
                st.lp_pruned += 1
                continue
            # every lower row must give the same coefficient for the new column
            num, den = rhs[m + lead], tail[lead]
            if any(v * num != rhs[m + r] * den for r, v in enumerate(tail)):
                st.lp_pruned += 1
                continue
            top = [sum(w * v for w, v in zip(transform[r], col)) for r in range(m)]
            self._finish(node, [f], [Fraction(num, den)], [top], rhs, det)

    def close_two_slots(self, node: BranchNode) -> None:
        """Two indicators left: enumerate only the pairs whose line system is solvable.

        After eliminating the fixed columns, a pair (a, b) needs g = W e0 in
        the span of u_a = W a and u_b = W b, with W the lower rows of the
        transform.  With u_a and u_b both off the line through g this holds
        exactly when their images modulo g are parallel, so candidates are
        bucketed by that direction and pairs are only formed inside a bucket.
        """
        st = self.out.stats
        model = self.model
        d = model.degree
        free, unmet = self._open_candidates(node)
        if not free:
            return
        red = self._eliminate(node)
        if red is None:
            st.lp_pruned += 1
            return
        transform, rhs, det, m = red
        g = rhs[m:]
        p = next((r for r, v in enumerate(g) if v), None)
        if p is None:
            # e0 already in the span of the fixed columns: any positive pair is a dependent one
            st.lp_pruned += 1
            return
        buckets: Dict[Tuple[int, ...], List[int]] = {}
        lower: Dict[int, List[int]] = {}
        for f in free:
            col = self.columns[f]
            u = [sum(w * v for w, v in zip(transform[r], col)) for r in range(m, d + 1)]
            w = [g[p] * x - u[p] * y for x, y in zip(u, g)]
            key = primitive(w)
            if not any(key):
                continue  # u parallel to g forces the partner to be parallel too
            buckets.setdefault(tuple(key), []).append(f)
            lower[f] = u
        for group in buckets.values():
            for a, b in combinations(group, 2):
                st.nodes += 1
                if not self._pair_allowed(node, a, b, unmet):
                    st.combinatorial_pruned += 1
                    continue
                ua, ub = lower[a], lower[b]
                minor = next(((i, j) for i in range(len(g)) for j in range(i + 1, len(g))
                              if ua[i] * ub[j] - ua[j] * ub[i]), None)
                if minor is None:
                    st.lp_pruned += 1  # a and b dependent modulo the fixed columns
                    continue
                i, j = minor
                D = ua[i] * ub[j] - ua[j] * ub[i]
                xa = Fraction(g[i] * ub[j] - g[j] * ub[i], D)
                xb = Fraction(ua[i] * g[j] - ua[j] * g[i], D)
                if any(xa * s + xb * t != v for s, t, v in zip(ua, ub, g)):
                    st.lp_pruned += 1
                    continue
                tops = [[sum(w * v for w, v in zip(transform[r], self.columns[f])) for r in range(m)] for f in (a, b)]
                self._finish(node, [a, b], [xa, xb], tops, rhs, det)

    def _pair_allowed(self, node: BranchNode, a: int, b: int, unmet) -> bool:
        model = self.model
        if b in model.neighbours[a]:
            return False
        for group in (model.pure_x, model.pure_y):
            if a in group and b in group:
                return False
        return all(a in grp or b in grp for grp in unmet)

    def branch_var(self, node: BranchNode, point: List[Fraction]) -> int:
        free = node.free()
        # settle the pure powers, then the top-degree groups, before anything else;
        # within a tier the largest relaxation value wins, ties to the earlier monomial
        for tier in self.tiers:
            pick = [i for i in free if i in tier]
            if pick:
                return max(pick, key=lambda i: (point[i], -i))
        return max(free, key=lambda i: (point[i], -i))

    def dfs(self, node: BranchNode, hint: Optional[List[Fraction]] = None) -> None:
        live = self.expand(node, hint)
        if live is None:
            return
        node, point = live
        if self.terminal(node):
            return
        i = self.branch_var(node, point)
        self.dfs(node.fix(i, 1), point)
        self.dfs(node.fix(i, 0), point)

    def frontier(self, node: BranchNode, depth: int, hint=None) -> List[Tuple[BranchNode, List[Fraction]]]:
        """Live nodes ``depth`` branchings below ``node``, in DFS order (leaves handled inline)."""
        live = self.expand(node, hint)
        if live is None:
            return []
        node, point = live
        if self.terminal(node):
            return []
        if depth == 0:
            return [(node, point)]
        i = self.branch_var(node, point)
        return self.frontier(node.fix(i, 1), depth - 1, point) + self.frontier(node.fix(i, 0), depth - 1, point)


def _run_subtrees(args) -> _Found:
    model, budget, items = args
    s = _Search(model, budget)
    for node, point in items:
        # the node was already counted and solved when the frontier was built
        if s.terminal(node):
            continue
        i = s.branch_var(node, point)
        s.dfs(node.fix(i, 1), point)
        s.dfs(node.fix(i, 0), point)
    return s.out


def enumerate_feasible(model: MipModel, jobs: int = 1, split_depth: int = 0, pivot_budget: int = DEFAULT_PIVOT_BUDGET,
                       shard: Tuple[int, int] = (0, 1)) -> _Found:
    """Exhaust the branch-and-bound tree; every leaf support is checked exactly.

    Subtrees rooted ``split_depth`` levels down are independent work items;
    with ``jobs > 1`` they run in worker processes and merge in tree order.
    ``shard = (i, k)`` keeps the i-th of k contiguous slices of those items.
    """
    i, k = shard
    if not 0 <= i < k:
        raise ValueError(f"bad shard {i}/{k}")
    top = _Search(model, pivot_budget)
    items = top.frontier(BranchNode.root(model), split_depth)
    items = items[(i * len(items)) // k: ((i + 1) * len(items)) // k]
    # leaves met while building the frontier belong to the first shard
    found = top.out if i == 0 else _Found()
    if jobs > 1 and len(items) > 1:
        step = max(1, len(items) // (jobs * 4))
        chunks = [(model, pivot_budget, items[i:i + step]) for i in range(0, len(items), step)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_run_subtrees, chunks))
    else:
        parts = [_run_subtrees((model, pivot_budget, items))]
    for part in parts:
        found.supports.extend(part.supports)
        found.polys.extend(part.polys)
        found.stats.merge(part.stats)
    return found


def mip_search(d: int, model: Optional[MipModel] = None, jobs: int = 1, split_depth: int = 0,
               pivot_budget: int = DEFAULT_PIVOT_BUDGET, shard: Tuple[int, int] = (0, 1)) -> SearchReport:
    """Sharp polynomials of degree ``d`` via the MIP backend, swaps restored."""
    model = model or build_model(d)
    if shard[1] > 1 and split_depth == 0:
        split_depth = SHARD_SPLIT_DEPTH
    t0 = time.perf_counter()
    found = enumerate_feasible(model, jobs=jobs, split_depth=split_depth, pivot_budget=pivot_budget, shard=shard)
    t1 = time.perf_counter()
    flags = dict(model.flags())
    return SearchReport(
        degree=d,
        n_terms=model.n_terms,
        backend="mip",
        flags=flags,
        raw=swap_closure(found.polys),
        stats=dict(sorted(vars(found.stats).items())),
        timing={"search_s": t1 - t0},
        shards=[{"index": shard[0], "count": shard[1], "split_depth": split_depth, "jobs": jobs}],
    )
