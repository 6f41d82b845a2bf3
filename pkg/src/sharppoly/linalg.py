"""Dense exact linear algebra: rational matrices, Bareiss nullspace, rank mod p."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import List, Optional, Sequence, Tuple, Union

__all__ = [
    "RationalMatrix",
    "integer_rows",
    "fraction_free_reduce",
    "nullspace",
    "rank",
    "rank_mod_p",
    "primitive",
]

Number = Union[int, Fraction]


@dataclass(frozen=True)
class RationalMatrix:
    """Rectangular matrix of exact rationals, stored row-major."""

    entries: Tuple[Tuple[Fraction, ...], ...]
    cols: int

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Number]], cols: int | None = None) -> "RationalMatrix":
        data = tuple(tuple(Fraction(v) for v in row) for row in rows)
        if cols is None:
            if not data:
                raise ValueError("column count required for a matrix with no rows")
            cols = len(data[0])
        if any(len(row) != cols for row in data):
            raise ValueError("ragged matrix")
        return cls(data, cols)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, idx: Tuple[int, int]) -> Fraction:
        i, j = idx
        return self.entries[i][j]

    def column(self, j: int) -> List[Fraction]:
        return [row[j] for row in self.entries]

    def select(self, rows: Sequence[int], cols: Sequence[int]) -> "RationalMatrix":
        return RationalMatrix(tuple(tuple(self.entries[i][j] for j in cols) for i in rows), len(cols))

    def apply(self, v: Sequence[Number]) -> List[Fraction]:
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} for {self.cols} columns")
        return [sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in self.entries]

    def tolist(self) -> List[List[Fraction]]:
        return [list(r) for r in self.entries]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RationalMatrix):
            return self.cols == other.cols and self.entries == other.entries
        if isinstance(other, (list, tuple)):
            return [list(r) for r in self.entries] == [[Fraction(v) for v in r] for r in other]
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.entries, self.cols))


def integer_rows(m: Union[RationalMatrix, Sequence[Sequence[Number]]]) -> List[List[int]]:
    """Scale each row by the lcm of its denominators; the row space is unchanged."""
    rows = m.entries if isinstance(m, RationalMatrix) else m
    out = []
    for row in rows:
        if all(type(v) is int or (isinstance(v, Fraction) and v.denominator == 1) for v in row):
            out.append([int(v) for v in row])
            continue
        fr = [Fraction(v) for v in row]
        scale = lcm(*(f.denominator for f in fr)) if fr else 1
        out.append([int(f * scale) for f in fr])
    return out


def fraction_free_reduce(a: List[List[int]], pivot_cols: Optional[int] = None) -> Tuple[List[List[int]], List[int], int]:
    """Fraction-free Gauss-Jordan elimination (Bareiss update on every row).

    Works in place on an integer matrix.  Returns ``(a, pivot_columns, det)``;
    on exit every pivot entry equals ``det`` and each pivot column is zero
    off its pivot row.  All divisions are exact.  With ``pivot_cols`` only the
    leading columns are eliminated; the rest are carried along.
    """
    n_rows = len(a)
    n_cols = len(a[0]) if a else 0
    if pivot_cols is not None:
        n_cols = min(n_cols, pivot_cols)
    prev = 1
    r = 0
    pivots: List[int] = []
    for c in range(n_cols):
        if r == n_rows:
            break
        p = next((i for i in range(r, n_rows) if a[i][c]), None)
        if p is None:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
        piv_row = a[r]
        piv = piv_row[c]
        for i in range(n_rows):
            if i == r:
                continue
            row = a[i]
            f = row[c]
            if f:
                a[i] = [(piv * x - f * y) // prev for x, y in zip(row, piv_row)]
            elif piv != prev:
                a[i] = [(piv * x) // prev for x in row]
        prev = piv
        pivots.append(c)
        r += 1
    return a, pivots, prev


def primitive(v: Sequence[int]) -> List[int]:
    """Divide out the content and make the last nonzero entry positive."""
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        return list(v)
    last = next(x for x in reversed(v) if x)
    if last < 0:
        g = -g
    return [x // g for x in v]


def nullspace(m: Union[RationalMatrix, Sequence[Sequence[Number]]], cols: int | None = None) -> List[List[Fraction]]:
    """Exact kernel basis of ``m``.

    One vector per free column; each is a primitive integer vector (as
    Fractions) whose last nonzero coordinate is positive.
    """
    if isinstance(m, RationalMatrix):
        cols = m.cols
    elif cols is None:
        cols = len(m[0]) if m else 0
    a = integer_rows(m)
    a, pivots, det = fraction_free_reduce(a)
    pivot_set = set(pivots)
    basis = []
    for f in range(cols):
        if f in pivot_set:
            continue
        v = [0] * cols
        v[f] = det
        for r, c in enumerate(pivots):
            v[c] = -a[r][f]
        basis.append([Fraction(x) for x in primitive(v)])
    return basis


def rank(m: Union[RationalMatrix, Sequence[Sequence[Number]]]) -> int:
    a = integer_rows(m)
    if not a:
        return 0
    return len(fraction_free_reduce(a)[1])


def rank_mod_p(m: Union[RationalMatrix, Sequence[Sequence[Number]]], p: int) -> int:
    """Rank over GF(p) of the integer-scaled rows of ``m``.

    Row scaling can only multiply rows by units or by multiples of ``p``;
    the latter can only lower the rank, so ``rank_mod_p <= rank`` holds
    either way.
    """
    rows = [[x % p for x in row] for row in integer_rows(m)]
    if not rows:
        return 0
    n_cols = len(rows[0])
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        pr = [(x * inv) % p for x in rows[r]]
        rows[r] = pr
        for i in range(r + 1, len(rows)):
            f = rows[i][c]
            if f:
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], pr)]
        r += 1
        if r == len(rows):
            break
    return r
