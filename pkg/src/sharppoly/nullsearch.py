"""Linear-algebra backend: find polynomials in H(2,d) by testing supports.

Every polynomial of degree at most ``d`` that is constant on ``x + y = 1``
is ``lam * (x+y)^d + sum c_jk * b_jk`` with ``b_jk = x^j y^k - x^j y^k
(x+y)^(d-j-k)``.  The matrix ``A`` maps the lower coefficients (and ``lam``)
to the degree-``d`` coefficients; restricting to a support gives ``A'``,
whose kernel holds every candidate polynomial with that support.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .exactpoly import (
    BivariatePoly,
    Monomial,
    X,
    Y,
    is_member,
    monomial_key,
    monomials_of_degree,
    monomials_up_to,
)
from .linalg import RationalMatrix, nullspace, rank_mod_p
from .report import FamilyWitness, SearchReport
from .simplex import feasible_point

__all__ = [
    "PREFILTER_PRIMES",
    "basis_poly",
    "column_monomials",
    "build_matrix",
    "support_submatrix",
    "PrefilterVerdict",
    "modular_prefilter",
    "Status",
    "SupportResult",
    "check_support",
    "analyse_support",
    "line_column",
    "sharp_term_count",
    "SearchConfig",
    "sharp_config",
    "terms_config",
    "enumerate_sharp",
    "enumerate_with_terms",
]

#: 19 is what the original search used; 10007 is a cheap second sieve.
PREFILTER_PRIMES = (19, 10007)


def sharp_term_count(d: int) -> int:
    """Minimal term count for degree ``d``: (d+3)/2 when odd, (d+4)/2 when even."""
    return (d + 3) // 2 if d % 2 else (d + 4) // 2


def basis_poly(j: int, k: int, d: int) -> BivariatePoly:
    if j < 0 or k < 0 or j + k > d - 1:
        raise ValueError(f"b_{{{j},{k}}} needs j + k <= d - 1 (d={d})")
    m = BivariatePoly.monomial(j, k)
    return m - m * (X + Y) ** (d - j - k)


def column_monomials(d: int) -> List[Monomial]:
    """Lower monomials indexing the columns of ``A`` (constant term excluded)."""
    return monomials_up_to(d - 1, start=1)


@lru_cache(maxsize=64)
def build_matrix(d: int) -> RationalMatrix:
    """The ``(d+1) x (#lower + 1)`` matrix sending ``(c..., lam)`` to the top coefficients."""
    if d < 1:
        raise ValueError("degree must be positive")
    cols = column_monomials(d)
    rows = []
    for (a, b) in monomials_of_degree(d):
        row = []
        for (j, k) in cols:
            e = d - j - k
            # coefficient of x^a y^b in x^j y^k (x+y)^e
            row.append(-comb(e, a - j) if 0 <= a - j <= e else 0)
        row.append(comb(d, b))
        rows.append(row)
    return RationalMatrix.from_rows(rows)


def _split(support: Iterable[Tuple[int, int]], d: int) -> Tuple[List[Monomial], List[Monomial]]:
    mons = sorted({Monomial(*m) for m in support}, key=monomial_key)
    top = [m for m in mons if m.degree == d]
    low = [m for m in mons if m.degree < d]
    if any(m.degree > d for m in mons):
        raise ValueError(f"support has a monomial above degree {d}")
    if Monomial(0, 0) in low:
        raise ValueError("the constant term is never part of a support (c_00 = 0)")
    return top, low


def support_submatrix(a: RationalMatrix, support: Iterable[Tuple[int, int]], d: int) -> RationalMatrix:
    """Columns of the support's lower monomials plus the last column; rows of absent top monomials."""
    top, low = _split(support, d)
    col_index = {m: i for i, m in enumerate(column_monomials(d))}
    cols = [col_index[m] for m in low] + [a.cols - 1]
    top_set = set(top)
    rows = [i for i, m in enumerate(monomials_of_degree(d)) if m not in top_set]
    return a.select(rows, cols)


class PrefilterVerdict(str, Enum):
    TRIVIAL_KERNEL = "DefinitelyTrivialKernel"
    UNKNOWN = "Unknown"


def modular_prefilter(m: RationalMatrix, p: int = 19) -> PrefilterVerdict:
    """Full column rank mod ``p`` proves the rational kernel is trivial."""
    if m.rows and rank_mod_p(m, p) == m.cols:
        return PrefilterVerdict.TRIVIAL_KERNEL
    return PrefilterVerdict.UNKNOWN


class Status(str, Enum):
    REJECTED_PREFILTER = "Rejected-Prefilter"
    REJECTED_NULLSPACE_DIM0 = "Rejected-NullspaceDim0"
    REJECTED_NULLSPACE_DIM_HIGH = "Rejected-NullspaceDimHigh"
    REJECTED_NEGATIVITY = "Rejected-Negativity"
    REJECTED_DEGREE_DROP = "Rejected-DegreeDrop"
    REJECTED_SUPPORT_MISMATCH = "Rejected-SupportMismatch"
    ACCEPTED = "Accepted"


@dataclass(frozen=True)
class SupportResult:
    status: Status
    nullspace_dim: int
    poly: Optional[BivariatePoly] = None
    detail: str = ""
    family: Optional[FamilyWitness] = None

    @property
    def accepted(self) -> bool:
        return self.status is Status.ACCEPTED


def _has_positive_tail_zero_row(m: RationalMatrix) -> bool:
    # a row (0, ..., 0, c) with c > 0 forces lam = 0 for any nonnegative kernel vector
    return any(all(v == 0 for v in row[:-1]) and row[-1] != 0 for row in m.entries)


def _reconstruct(d: int, low: Sequence[Monomial], vec: Sequence[Fraction]) -> BivariatePoly:
    """Full polynomial from lower coefficients ``vec[:-1]`` and ``lam = vec[-1]``."""
    a = build_matrix(d)
    col_index = {m: i for i, m in enumerate(column_monomials(d))}
    full = [Fraction(0)] * a.cols
    for m, c in zip(low, vec[:-1]):
        full[col_index[m]] = c
    full[-1] = vec[-1]
    top = a.apply(full)
    terms = {m: c for m, c in zip(low, vec[:-1])}
    terms.update({m: c for m, c in zip(monomials_of_degree(d), top)})
    return BivariatePoly.from_terms(terms)


def _judge(d: int, support_set: frozenset, low: Sequence[Monomial], vec: Sequence[Fraction], dim: int) -> SupportResult:
    if vec[-1] == 0:
        return SupportResult(Status.REJECTED_NEGATIVITY, dim, detail="kernel vector vanishes on the line")
    lam = vec[-1]
    vec = [v / lam for v in vec]
    p = _reconstruct(d, low, vec)
    neg = next(((m, c) for m, c in p.sorted_terms() if c < 0), None)
    if neg is not None:
        return SupportResult(Status.REJECTED_NEGATIVITY, dim, p, detail=f"negative coefficient at {tuple(neg[0])}")
    if p.degree != d:
        return SupportResult(Status.REJECTED_DEGREE_DROP, dim, p)
    if p.support != support_set:
        return SupportResult(Status.REJECTED_SUPPORT_MISMATCH, dim, p, detail="zero coefficient on the support")
    if not is_member(p, d):
        raise AssertionError(f"reconstruction produced a non-member {p}")
    return SupportResult(Status.ACCEPTED, dim, p)


def check_support(d: int, support: Iterable[Tuple[int, int]], primes: Sequence[int] = PREFILTER_PRIMES) -> SupportResult:
    """Decide whether a sharp-style (isolated) polynomial has exactly this support.

    Stages, in order: zero-row shortcut, modular prefilter(s), exact
    nullspace; then a one-dimensional kernel is scaled so the value on the
    line is 1 and the polynomial is checked.
    """
    support_set = frozenset(Monomial(*m) for m in support)
    top, low = _split(support_set, d)
    a_sub = support_submatrix(build_matrix(d), support_set, d)
    if _has_positive_tail_zero_row(a_sub):
        return SupportResult(Status.REJECTED_PREFILTER, 0, detail="zero row with positive tail")
    for p in primes:
        if modular_prefilter(a_sub, p) is PrefilterVerdict.TRIVIAL_KERNEL:
            return SupportResult(Status.REJECTED_PREFILTER, 0, detail=f"full rank mod {p}")
    kernel = nullspace(a_sub)
    dim = len(kernel)
    if dim == 0:
        return SupportResult(Status.REJECTED_NULLSPACE_DIM0, 0)
    if dim > 1:
        return SupportResult(Status.REJECTED_NULLSPACE_DIM_HIGH, dim)
    return _judge(d, support_set, low, kernel[0], 1)


def line_column(m: Tuple[int, int], d: int) -> List[int]:
    """Coefficients of ``x^j (1-x)^k`` in powers ``x^0 .. x^d``."""
    j, k = m
    col = [0] * (d + 1)
    for i in range(k + 1):
        col[j + i] = -comb(k, i) if i & 1 else comb(k, i)
    return col


def _family_witness(d: int, support: Sequence[Monomial], dim: int) -> Optional[FamilyWitness]:
    """Exact LP: is there a member strictly positive on ``support``?

    Works with the coefficients directly: ``sum c_m x^j (1-x)^k = lam`` with
    ``c_m >= 1`` and ``lam >= 1`` (a scaled strictly positive point).
    """
    cols = [line_column(m, d) for m in support]
    n = len(support) + 1
    eq = []
    for t in range(d + 1):
        coeffs = [cols[i][t] for i in range(len(support))] + [-1 if t == 0 else 0]
        # shift every variable by 1 so the bound becomes >= 0
        eq.append((coeffs, -sum(coeffs)))
    res = feasible_point(n, eq=eq)
    if not res.feasible:
        return None
    point = [v + 1 for v in res.point]
    lam = point[-1]
    base = [v / lam for v in point[:-1]]
    # a direction inside the family: kernel of the columns alone (value 0 on the line)
    rows = [[cols[i][t] for i in range(len(support))] for t in range(d + 1)]
    direction = nullspace(rows, cols=len(support))[0]
    step = min(base[i] / (-2 * w) for i, w in enumerate(direction) if w < 0)
    other = [b + step * w for b, w in zip(base, direction)]
    p0 = BivariatePoly.from_terms(zip(support, base))
    p1 = BivariatePoly.from_terms(zip(support, other))
    for p in (p0, p1):
        if not is_member(p, d) or p.support != frozenset(support):
            raise AssertionError(f"family member check failed for {p}")
    return FamilyWitness(tuple(tuple(m) for m in support), dim, (p0, p1))


def analyse_support(d: int, support: Iterable[Tuple[int, int]], primes: Sequence[int] = PREFILTER_PRIMES) -> SupportResult:
    """Like :func:`check_support`, but a kernel of dimension >= 2 is tested for a family."""
    res = check_support(d, support, primes)
    if res.status is not Status.REJECTED_NULLSPACE_DIM_HIGH:
        return res
    mons = sorted({Monomial(*m) for m in support}, key=monomial_key)
    fam = _family_witness(d, mons, res.nullspace_dim)
    if fam is None:
        return res
    return SupportResult(Status.REJECTED_NULLSPACE_DIM_HIGH, res.nullspace_dim, detail="family", family=fam)


# --- enumeration ---------------------------------------------------------------


@dataclass(frozen=True)
class SearchConfig:
    """Which structural constraints prune the support enumeration."""

    degree: int
    n_terms: int
    top_is_xd_yd: bool = False        # degree-d part is exactly x^d + y^d
    pure_terms: bool = True           # exactly one pure x-term and one pure y-term
    need_degree_d_minus_1: bool = False
    no_even_j_degree_d_minus_1: bool = False
    no_adjacent: bool = False         # never both x^k y^(m+1) and x^(k+1) y^m
    allow_families: bool = False
    primes: Tuple[int, ...] = PREFILTER_PRIMES
    audit_rate: float = 0.01
    audit_per_unit: int = 4
    audit_cap: int = 2000             # per run; a seeded subsample when more were drawn
    seed: int = 0

    def flags(self) -> Dict[str, object]:
        return {
            "degree": self.degree,
            "n_terms": self.n_terms,
            "top_is_xd_yd": self.top_is_xd_yd,
            "pure_terms": self.pure_terms,
            "need_degree_d_minus_1": self.need_degree_d_minus_1,
            "no_even_j_degree_d_minus_1": self.no_even_j_degree_d_minus_1,
            "no_adjacent": self.no_adjacent,
            "allow_families": self.allow_families,
            "primes": list(self.primes),
        }


def sharp_config(d: int, **overrides) -> SearchConfig:
    """Constraint set for sharp polynomials of degree ``d``."""
    if d < 1:
        raise ValueError("degree must be positive")
    odd = d % 2 == 1
    kwargs = dict(
        degree=d,
        n_terms=sharp_term_count(d),
        top_is_xd_yd=odd,
        pure_terms=True,
        need_degree_d_minus_1=odd and d > 1,
        no_even_j_degree_d_minus_1=odd and d > 1,
        no_adjacent=odd and d > 1,
    )
    kwargs.update(overrides)
    return SearchConfig(**kwargs)


def terms_config(d: int, n: int, **overrides) -> SearchConfig:
    """Constraint set for all polynomials with exactly ``n`` terms.

    The one-pure-term-per-variable rule is proved for sharp polynomials only
    (x + y + xy + x^2 spans a family with two pure x terms), so it stays off
    here; only the top-degree parity rule, valid for every member, applies.
    """
    if d > 2 * n - 3:
        raise ValueError(f"no member of H(2,{d}) has {n} terms (needs d <= 2N - 3)")
    kwargs = dict(degree=d, n_terms=n, pure_terms=False, allow_families=True)
    kwargs.update(overrides)
    return SearchConfig(**kwargs)


def enumerate_sharp(d: int, config: Optional[SearchConfig] = None, shard: Tuple[int, int] = (0, 1), jobs: int = 1) -> SearchReport:
    """All sharp polynomials of degree ``d`` under the configured constraints."""
    from .enumeration import run_search

    config = config or sharp_config(d)
    return run_search(config, shard=shard, jobs=jobs)


def enumerate_with_terms(d: int, n: int, config: Optional[SearchConfig] = None, shard: Tuple[int, int] = (0, 1), jobs: int = 1) -> SearchReport:
    """Isolated members of H(2,d) with exactly ``n`` terms, plus detected families."""
    from .enumeration import run_search

    config = config or terms_config(d, n)
    return run_search(config, shard=shard, jobs=jobs)
