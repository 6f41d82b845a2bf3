"""Sign diagrams of the quotient ``q`` with ``p - 1 = (x + y - 1) q``.

The coefficient of ``x^j y^k`` in ``p - 1`` is ``q[j, k-1] + q[j-1, k] - q[j, k]``,
so the signs of an entry, the entry to its left (one less y) and the entry
below it (one less x) can force that coefficient to be positive (a sink) or
negative (a source).  Positions outside the grid read as zero.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import FrozenSet, List, Optional, Tuple

from .exactpoly import BivariatePoly, Monomial, is_member, quotient_q

__all__ = [
    "Sign",
    "SignDiagram",
    "DiagramAnalysis",
    "CheckReport",
    "SINK_PATTERNS",
    "SOURCE_PATTERNS",
    "sign_diagram",
    "analyze",
    "structural_check",
    "min_sinks",
]


class Sign(str, Enum):
    P = "P"
    N = "N"
    Z = "0"

    def dual(self) -> "Sign":
        return {Sign.P: Sign.N, Sign.N: Sign.P, Sign.Z: Sign.Z}[self]


P, N, Z = Sign.P, Sign.N, Sign.Z

#: (left, entry, below) triples; the lower-left corner of the 2x2 block is a wildcard
SINK_PATTERNS: FrozenSet[Tuple[Sign, Sign, Sign]] = frozenset({
    (P, N, P),
    (Z, N, P),
    (P, N, Z),
    (Z, N, Z),
    (P, Z, P),
    (Z, Z, P),
    (P, Z, Z),
})
SOURCE_PATTERNS = frozenset(tuple(s.dual() for s in pat) for pat in SINK_PATTERNS)


def min_sinks(d: int) -> int:
    """Fewest sinks any diagram of a degree-``d`` member can have."""
    return (d + 4) // 2


@dataclass(frozen=True)
class SignDiagram:
    """``grid[j][k]`` is the sign of the coefficient of ``x^j y^k`` in ``q``."""

    d: int
    grid: Tuple[Tuple[Sign, ...], ...]

    def at(self, j: int, k: int) -> Sign:
        if 0 <= j <= self.d and 0 <= k <= self.d:
            return self.grid[j][k]
        return Z

    def block(self, j: int, k: int) -> Tuple[Sign, Sign, Sign]:
        return (self.at(j, k - 1), self.at(j, k), self.at(j - 1, k))

    def render(self, marks: FrozenSet[Monomial] = frozenset()) -> str:
        """x-powers as rows (highest on top), y-powers as columns; marked cells bracketed."""
        lines = []
        for j in range(self.d, -1, -1):
            label = "1" if j == 0 else ("x" if j == 1 else f"x^{j}")
            cells = []
            for k in range(self.d + 1):
                s = self.grid[j][k].value
                cells.append(f"[{s}] " if Monomial(j, k) in marks else f" {s}  ")
            lines.append(f"{label:>5} " + "".join(cells))
        footer = ["1"] + ["y" if k == 1 else f"y^{k}" for k in range(1, self.d + 1)]
        lines.append(" " * 6 + "".join(f"{f:<4}" for f in footer))
        return "\n".join(lines)


def sign_diagram(q: BivariatePoly, d: int) -> SignDiagram:
    if q.degree > d - 1:
        raise ValueError(f"quotient of degree {q.degree} does not fit a degree-{d} diagram")
    rows = []
    for j in range(d + 1):
        row = []
        for k in range(d + 1):
            c = q.coeff(j, k)
            row.append(P if c > 0 else N if c < 0 else Z)
        rows.append(tuple(row))
    return SignDiagram(d, tuple(rows))


@dataclass(frozen=True)
class DiagramAnalysis:
    sinks: FrozenSet[Monomial]
    sources: FrozenSet[Monomial]

    @property
    def sink_count(self) -> int:
        return len(self.sinks)


def analyze(diag: SignDiagram) -> DiagramAnalysis:
    sinks, sources = set(), set()
    for j in range(diag.d + 1):
        for k in range(diag.d + 1):
            b = diag.block(j, k)
            if b in SINK_PATTERNS:
                sinks.add(Monomial(j, k))
            elif b in SOURCE_PATTERNS:
                sources.add(Monomial(j, k))
    return DiagramAnalysis(frozenset(sinks), frozenset(sources))


@dataclass
class CheckReport:
    degree: int
    sinks: FrozenSet[Monomial]
    sources: FrozenSet[Monomial]
    support: FrozenSet[Monomial]
    sinks_in_support: bool
    single_source: bool
    enough_sinks: bool
    sinks_equal_support: Optional[bool] = None
    problems: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.sinks_in_support and self.single_source and self.enough_sinks
                and self.sinks_equal_support is not False)


def structural_check(p: BivariatePoly, d: int, sharp: bool = False) -> CheckReport:
    """Diagram-level consistency of a member of H(2,d)."""
    if not is_member(p, d):
        raise ValueError(f"{p} is not in H(2,{d})")
    res = analyze(sign_diagram(quotient_q(p), d))
    support = p.support
    rep = CheckReport(
        degree=d,
        sinks=res.sinks,
        sources=res.sources,
        support=support,
        sinks_in_support=res.sinks <= support,
        single_source=len(res.sources) == 1,
        enough_sinks=res.sink_count >= min_sinks(d),
    )
    if not rep.sinks_in_support:
        rep.problems.append(f"sinks off the support: {sorted(res.sinks - support)}")
    if not rep.single_source:
        rep.problems.append(f"{len(res.sources)} sources: {sorted(res.sources)}")
    if not rep.enough_sinks:
        rep.problems.append(f"only {res.sink_count} sinks, need {min_sinks(d)}")
    if sharp:
        rep.sinks_equal_support = res.sinks == support
        if not rep.sinks_equal_support:
            rep.problems.append(f"support terms without a sink: {sorted(support - res.sinks)}")
    return rep
