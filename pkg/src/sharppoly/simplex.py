"""Exact phase-I simplex for LP feasibility.

The tableau is kept fraction-free: every entry is an integer and the true
tableau is ``T / det``, where ``det`` is the running pivot (Edmonds'
integer-preserving update).  Variables carry a lower bound of 0 and an
optional finite upper bound; variables sitting at their upper bound are
complemented (``x = u - x'``) so every nonbasic variable is at 0.

Pivoting follows Bland's rule (smallest eligible index enters, ties in the
ratio test go to the smallest basic index), so the method terminates.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import List, Optional, Sequence, Union

__all__ = ["LpTableau", "LpResult", "PivotBudgetExceeded", "feasible_point", "DEFAULT_PIVOT_BUDGET"]

DEFAULT_PIVOT_BUDGET = 10 ** 6

Number = Union[int, Fraction]


class PivotBudgetExceeded(RuntimeError):
    pass


@dataclass
class LpResult:
    feasible: bool
    point: Optional[List[Fraction]]
    pivots: int


def _int_row(coeffs: Sequence[Number], rhs: Number) -> List[int]:
    if type(rhs) is int and all(type(c) is int for c in coeffs):
        return list(coeffs) + [rhs]
    coeffs = [Fraction(c) for c in coeffs]
    rhs = Fraction(rhs)
    scale = lcm(*(c.denominator for c in coeffs), rhs.denominator)
    return [int(c * scale) for c in coeffs] + [int(rhs * scale)]


@dataclass
class LpTableau:
    """Fraction-free simplex tableau with basis bookkeeping.

    Column layout: structural variables, then one slack per inequality
    row, then artificials.  Row 0 of ``rows`` is the phase-I objective.
    """

    rows: List[List[int]]
    basis: List[int]
    det: int
    n_struct: int
    n_total: int
    first_artificial: int
    bounded: List[bool]
    complemented: List[bool]
    pivots: int = 0
    budget: int = DEFAULT_PIVOT_BUDGET
    banned: List[bool] = field(default_factory=list)

    @classmethod
    def build(
        cls,
        n: int,
        eq: Sequence[tuple],
        le: Sequence[tuple],
        bounded: Sequence[bool],
        budget: int = DEFAULT_PIVOT_BUDGET,
    ) -> "LpTableau":
        # eq / le items are (coefficients, rhs) with len(coefficients) == n
        n_slack = len(le)
        raw: List[List[int]] = []
        slack_sign: List[int] = []
        for coeffs, rhs in eq:
            raw.append(_int_row(coeffs, rhs))
            slack_sign.append(0)
        for coeffs, rhs in le:
            raw.append(_int_row(coeffs, rhs))
            slack_sign.append(1)
        # choose an initial basis: slack where usable, artificial otherwise
        art_rows = []
        for i, row in enumerate(raw):
            if row[-1] < 0:
                raw[i] = [-v for v in row]
                if slack_sign[i]:
                    slack_sign[i] = -1
            if slack_sign[i] != 1:
                art_rows.append(i)
        first_art = n + n_slack
        n_total = first_art + len(art_rows)
        rows: List[List[int]] = []
        basis: List[int] = []
        slack_idx = 0
        art_of_row = {r: first_art + t for t, r in enumerate(art_rows)}
        for i, row in enumerate(raw):
            full = row[:-1] + [0] * (n_total - n) + [row[-1]]
            if i >= len(eq):
                full[n + slack_idx] = slack_sign[i]
                if slack_sign[i] == 1:
                    basis.append(n + slack_idx)
                slack_idx += 1
            if i in art_of_row:
                full[art_of_row[i]] = 1
                basis.append(art_of_row[i])
            rows.append(full)
        obj = [0] * (n_total + 1)
        for i in art_rows:
            for j in range(first_art):
                obj[j] -= rows[i][j]
            obj[-1] -= rows[i][-1]
        bnd = list(bounded) + [False] * (n_total - n)
        return cls(
            rows=[obj] + rows,
            basis=basis,
            det=1,
            n_struct=n,
            n_total=n_total,
            first_artificial=first_art,
            bounded=bnd,
            complemented=[False] * n_total,
            budget=budget,
            banned=[j >= first_art for j in range(n_total)],
        )

    # -- primitive operations --------------------------------------------
    def _tick(self) -> None:
        self.pivots += 1
        if self.pivots > self.budget:
            raise PivotBudgetExceeded(f"pivot budget {self.budget} exhausted")

    def complement(self, j: int) -> None:
        """Replace nonbasic bounded ``x_j`` by ``1 - x_j``."""
        for row in self.rows:
            a = row[j]
            if a:
                row[-1] -= a
                row[j] = -a
        self.complemented[j] = not self.complemented[j]

    def pivot(self, r: int, c: int) -> None:
        """Pivot on constraint row ``r`` (1-based in ``rows``) and column ``c``."""
        prow = self.rows[r]
        p = prow[c]
        d = self.det
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row[c]
            if f:
                self.rows[i] = [(p * x - f * y) // d for x, y in zip(row, prow)]
            elif p != d:
                self.rows[i] = [(p * x) // d for x in row]
        self.det = p
        if p < 0:
            self.det = -p
            self.rows = [[-x for x in row] for row in self.rows]
        self.basis[r - 1] = c

    # -- phase I ----------------------------------------------------------
    def run_phase_one(self) -> bool:
        """Minimize the sum of artificials; True iff the optimum is zero."""
        while True:
            if self.rows[0][-1] == 0:
                return True
            basic = set(self.basis)
            enter = next(
                (j for j in range(self.n_total)
                 if not self.banned[j] and j not in basic and self.rows[0][j] < 0),
                None,
            )
            if enter is None:
                return False
            self._step(enter)

    def _step(self, c: int) -> None:
        det = self.det
        best_num, best_den = (1, 1) if self.bounded[c] else (None, None)
        best_row = None
        best_var = None
        for i in range(1, len(self.rows)):
            a = self.rows[i][c]
            if a == 0:
                continue
            rhs = self.rows[i][-1]
            var = self.basis[i - 1]
            if a > 0:
                num, den = rhs, a
            elif self.bounded[var]:
                num, den = det - rhs, -a
            else:
                continue
            if best_num is None:
                better = True
            else:
                lhs, rhs_cmp = num * best_den, best_num * den
                # flip wins ties; among rows Bland picks the smallest basic index
                better = lhs < rhs_cmp or (
                    lhs == rhs_cmp and best_row is not None and var < best_var
                )
            if better:
                best_num, best_den, best_row, best_var = num, den, i, var
        self._tick()
        if best_num is None:
            raise ArithmeticError("unbounded direction in phase I")
        if best_row is None:
            self.complement(c)
            return
        leaves_at_upper = self.rows[best_row][c] < 0
        self.pivot(best_row, c)
        if best_var >= self.first_artificial:
            self.banned[best_var] = True
        elif leaves_at_upper:
            self.complement(best_var)

    def solution(self) -> List[Fraction]:
        x = [Fraction(0)] * self.n_total
        for i, var in enumerate(self.basis):
            x[var] = Fraction(self.rows[i + 1][-1], self.det)
        for j in range(self.n_total):
            if self.complemented[j]:
                x[j] = 1 - x[j]
        return x[: self.n_struct]


def feasible_point(
    n: int,
    eq: Sequence[tuple] = (),
    le: Sequence[tuple] = (),
    upper: Optional[Sequence[Optional[Number]]] = None,
    pivot_budget: int = DEFAULT_PIVOT_BUDGET,
) -> LpResult:
    """Find an exact point of ``{x >= 0, x <= upper, eq rows ==, le rows <=}``.

    ``eq`` and ``le`` are sequences of ``(coefficients, rhs)`` pairs with
    dense coefficient lists of length ``n``.  ``upper[j] is None`` means no
    upper bound.  Returns an infeasible result (``point=None``) otherwise.
    """
    upper = list(upper) if upper is not None else [None] * n
    scale = [Fraction(1)] * n
    bounded = [False] * n
    for j, u in enumerate(upper):
        if u is None:
            continue
        u = Fraction(u)
        if u < 0:
            return LpResult(False, None, 0)
        if u == 0:
            scale[j] = Fraction(0)
        else:
            scale[j] = u
            bounded[j] = True

    def rescale(rows):
        if all(s == 1 for s in scale):
            return rows
        return [([Fraction(c) * s for c, s in zip(coeffs, scale)], rhs) for coeffs, rhs in rows]

    tab = LpTableau.build(n, rescale(eq), rescale(le), bounded, pivot_budget)
    if not tab.run_phase_one():
        return LpResult(False, None, tab.pivots)
    z = tab.solution()
    return LpResult(True, [zi * s for zi, s in zip(z, scale)], tab.pivots)
