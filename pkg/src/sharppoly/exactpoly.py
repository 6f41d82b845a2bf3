"""Exact sparse bivariate polynomials over the rationals.

Everything here is exact: coefficients are :class:`fractions.Fraction`, and
no operation ever rounds.  Polynomials are immutable maps from exponent
pairs ``(j, k)`` (meaning ``x**j * y**k``) to nonzero coefficients.

The canonical monomial order is graded lexicographic with x-major ties:
first by total degree ``j + k``, then by ``j`` descending.  So degree 3 runs
``x^3, x^2y, xy^2, y^3``.
"""
from __future__ import annotations

import re
from functools import lru_cache
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, Iterable, Iterator, List, Mapping, NamedTuple, Optional, Tuple, Union

__all__ = [
    "NEG_INF",
    "Monomial",
    "monomial_key",
    "monomials_of_degree",
    "monomials_up_to",
    "BivariatePoly",
    "UnivariatePoly",
    "MembershipReport",
    "NotConstantOnLine",
    "X",
    "Y",
    "ONE",
    "LINE",
    "restrict_to_line",
    "is_member",
    "quotient_q",
    "swap_vars",
    "canonical_form",
    "invariant_coefficient",
    "invariant_sharp",
    "conjugate_expansion",
    "invariant_even",
    "parse_poly",
    "format_poly",
]

#: Degree of the zero polynomial.  Deliberately not an int.
NEG_INF = float("-inf")

Coef = Union[int, Fraction]


class Monomial(NamedTuple):
    """Exponent pair of ``x**j * y**k``."""

    j: int
    k: int

    @property
    def degree(self) -> int:
        return self.j + self.k

    def swapped(self) -> "Monomial":
        return Monomial(self.k, self.j)


def monomial_key(m: Tuple[int, int]) -> Tuple[int, int]:
    """Sort key for the graded-lex, x-major order."""
    return (m[0] + m[1], -m[0])


def monomials_of_degree(d: int) -> List[Monomial]:
    """``x^d, x^(d-1)y, ..., y^d``."""
    return [Monomial(d - i, i) for i in range(d + 1)]


def monomials_up_to(d: int, start: int = 0) -> List[Monomial]:
    """All monomials of degree ``start..d`` in canonical order."""
    out: List[Monomial] = []
    for s in range(start, d + 1):
        out.extend(monomials_of_degree(s))
    return out


class NotConstantOnLine(ArithmeticError):
    """Raised when division by ``x + y - 1`` leaves a remainder."""


def _frac(c: Coef) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


@dataclass(frozen=True, eq=False)
class BivariatePoly:
    """Immutable sparse polynomial in ``x`` and ``y`` with rational coefficients.

    Build one with :meth:`from_terms` (which drops zeros and normalizes
    keys) rather than the raw constructor.
    """

    terms: Mapping[Monomial, Fraction]
    degree: Union[int, float] = field(init=False)

    def __post_init__(self) -> None:
        deg = max((m[0] + m[1] for m in self.terms), default=NEG_INF)
        object.__setattr__(self, "degree", deg)

    # construction -------------------------------------------------------
    @classmethod
    def from_terms(cls, terms: Union[Mapping[Tuple[int, int], Coef], Iterable[Tuple[Tuple[int, int], Coef]]]) -> "BivariatePoly":
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: Dict[Monomial, Fraction] = {}
        for (j, k), c in items:
            if j < 0 or k < 0:
                raise ValueError(f"negative exponent in x^{j}y^{k}")
            key = Monomial(j, k)
            acc[key] = acc.get(key, Fraction(0)) + _frac(c)
        return cls._trusted({m: c for m, c in acc.items() if c != 0})

    @classmethod
    def _trusted(cls, terms: Dict[Monomial, Fraction]) -> "BivariatePoly":
        # caller guarantees Monomial keys and no zero values
        return cls(dict(sorted(terms.items(), key=lambda t: monomial_key(t[0]))))

    @classmethod
    def zero(cls) -> "BivariatePoly":
        return cls({})

    @classmethod
    def constant(cls, c: Coef) -> "BivariatePoly":
        return cls.from_terms({(0, 0): c})

    @classmethod
    def monomial(cls, j: int, k: int, c: Coef = 1) -> "BivariatePoly":
        return cls.from_terms({(j, k): c})

    # queries ------------------------------------------------------------
    @property
    def term_count(self) -> int:
        return len(self.terms)

    @property
    def support(self) -> frozenset:
        return frozenset(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, j: int, k: int) -> Fraction:
        return self.terms.get(Monomial(j, k), Fraction(0))

    def sorted_terms(self) -> List[Tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: monomial_key(t[0]))

    def homogeneous_part(self, s: int) -> "BivariatePoly":
        return BivariatePoly._trusted({m: c for m, c in self.terms.items() if m[0] + m[1] == s})

    def is_symmetric(self) -> bool:
        return self == swap_vars(self)

    # arithmetic ---------------------------------------------------------
    def __add__(self, other: Union["BivariatePoly", Coef]) -> "BivariatePoly":
        other = _as_poly(other)
        acc = dict(self.terms)
        for m, c in other.terms.items():
            v = acc.get(m, 0) + c
            if v:
                acc[m] = v
            else:
                acc.pop(m, None)
        return BivariatePoly._trusted(acc)

    __radd__ = __add__

    def __neg__(self) -> "BivariatePoly":
        return BivariatePoly._trusted({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: Union["BivariatePoly", Coef]) -> "BivariatePoly":
        return self + (-_as_poly(other))

    def __rsub__(self, other: Coef) -> "BivariatePoly":
        return _as_poly(other) - self

    def __mul__(self, other: Union["BivariatePoly", Coef]) -> "BivariatePoly":
        if not isinstance(other, BivariatePoly):
            c0 = _frac(other)
            if c0 == 0:
                return BivariatePoly.zero()
            return BivariatePoly._trusted({m: c * c0 for m, c in self.terms.items()})
        acc: Dict[Monomial, Fraction] = {}
        for (a, b), c in self.terms.items():
            for (e, f), g in other.terms.items():
                key = Monomial(a + e, b + f)
                acc[key] = acc.get(key, 0) + c * g
        return BivariatePoly._trusted({m: c for m, c in acc.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BivariatePoly":
        if n < 0:
            raise ValueError("negative power")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, j: int, k: int, c: Coef = 1) -> "BivariatePoly":
        """Return ``c * x^j * y^k * self``."""
        c = _frac(c)
        if c == 0:
            return BivariatePoly.zero()
        return BivariatePoly._trusted({Monomial(a + j, b + k): v * c for (a, b), v in self.terms.items()})

    def __call__(self, x: Coef, y: Coef) -> Fraction:
        x, y = _frac(x), _frac(y)
        return sum((c * x ** m[0] * y ** m[1] for m, c in self.terms.items()), Fraction(0))

    # comparison / hashing ----------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = BivariatePoly.constant(other)
        if not isinstance(other, BivariatePoly):
            return NotImplemented
        return dict(self.terms) == dict(other.terms)

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def sort_key(self) -> Tuple:
        """Total order used for canonical forms and report sorting."""
        return tuple((monomial_key(m), c) for m, c in self.sorted_terms())

    def __repr__(self) -> str:
        return f"BivariatePoly({format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)


def _as_poly(p: Union[BivariatePoly, Coef]) -> BivariatePoly:
    return p if isinstance(p, BivariatePoly) else BivariatePoly.constant(p)


X = BivariatePoly.monomial(1, 0)
Y = BivariatePoly.monomial(0, 1)
ONE = BivariatePoly.constant(1)
#: ``x + y - 1``
LINE = BivariatePoly.from_terms({(1, 0): 1, (0, 1): 1, (0, 0): -1})


@dataclass(frozen=True)
class UnivariatePoly:
    """Dense polynomial in ``x``; ``coefficients[i]`` multiplies ``x**i``."""

    coefficients: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        cs = list(self.coefficients)
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coefficients", tuple(_frac(c) for c in cs))

    @property
    def degree(self) -> Union[int, float]:
        return len(self.coefficients) - 1 if self.coefficients else NEG_INF

    def is_constant(self, value: Coef) -> bool:
        return self.coefficients == UnivariatePoly((value,)).coefficients

    def __mul__(self, other: "UnivariatePoly") -> "UnivariatePoly":
        out = [Fraction(0)] * max(len(self.coefficients) + len(other.coefficients) - 1, 0)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return UnivariatePoly(tuple(out))


def restrict_to_line(p: BivariatePoly) -> UnivariatePoly:
    """Return ``p(x, 1 - x)`` by expanding ``(1 - x)**k`` exactly."""
    if p.is_zero():
        return UnivariatePoly(())
    out = [Fraction(0)] * (int(p.degree) + 1)
    for (j, k), c in p.terms.items():
        for i in range(k + 1):
            term = comb(k, i)
            out[j + i] += c * (-term if i & 1 else term)
    return UnivariatePoly(tuple(out))


@dataclass(frozen=True)
class MembershipReport:
    """Outcome of :func:`is_member`; failures are data, not exceptions."""

    constant_on_line: bool
    nonnegative: bool
    degree_ok: bool
    degree: Union[int, float]
    term_count: int
    line_residual: Optional[UnivariatePoly] = None
    negative_term: Optional[Tuple[Monomial, Fraction]] = None

    @property
    def member(self) -> bool:
        return self.constant_on_line and self.nonnegative and self.degree_ok

    def __bool__(self) -> bool:
        return self.member

    def reasons(self) -> List[str]:
        out = []
        if not self.constant_on_line:
            out.append(f"p(x,1-x) != 1 (got {self.line_residual.coefficients})")
        if not self.nonnegative:
            m, c = self.negative_term
            out.append(f"negative coefficient {c} at x^{m.j}y^{m.k}")
        if not self.degree_ok:
            out.append(f"degree {self.degree} does not match")
        return out


def is_member(p: BivariatePoly, d: int) -> MembershipReport:
    """Check membership of ``p`` in H(2, d), with three independent tests."""
    h = restrict_to_line(p)
    on_line = h.is_constant(1)
    negative = next(((m, c) for m, c in p.sorted_terms() if c < 0), None)
    return MembershipReport(
        constant_on_line=on_line,
        nonnegative=negative is None,
        degree_ok=p.degree == d,
        degree=p.degree,
        term_count=p.term_count,
        line_residual=None if on_line else h,
        negative_term=negative,
    )


def _divide_by_x_plus_y(h: Dict[int, Fraction], s: int) -> Dict[int, Fraction]:
    """Divide the degree-``s`` form ``sum h[j] x^j y^(s-j)`` by ``x + y``.

    Returns the degree ``s-1`` quotient keyed the same way, or raises
    :class:`NotConstantOnLine` if there is a remainder.
    """
    g: Dict[int, Fraction] = {}
    carry = Fraction(0)
    for j in range(s, 0, -1):
        carry = h.get(j, 0) - carry
        if carry:
            g[j - 1] = carry
    if h.get(0, 0) != carry:
        raise NotConstantOnLine("p is not constant 1 on x + y = 1")
    return g


def quotient_q(p: BivariatePoly) -> BivariatePoly:
    """Exact ``q`` with ``p - 1 = (x + y - 1) * q``.

    Comparing homogeneous parts gives ``(p-1)_(s+1) = (x+y) q_s - q_(s+1)``,
    so ``q`` is peeled off from the top degree down.
    """
    r = p - ONE
    if r.is_zero():
        return BivariatePoly.zero()
    top = int(r.degree)
    by_degree: Dict[int, Dict[int, Fraction]] = {}
    for (j, k), c in r.terms.items():
        by_degree.setdefault(j + k, {})[j] = c
    q: Dict[Monomial, Fraction] = {}
    upper: Dict[int, Fraction] = {}
    for s in range(top - 1, -1, -1):
        h = dict(by_degree.get(s + 1, {}))
        for j, c in upper.items():
            h[j] = h.get(j, 0) + c
        upper = _divide_by_x_plus_y(h, s + 1)
        for j, c in upper.items():
            q[Monomial(j, s - j)] = c
    if by_degree.get(0, {}).get(0, 0) != -upper.get(0, 0):
        raise NotConstantOnLine("p is not constant 1 on x + y = 1")
    return BivariatePoly._trusted(q)


def swap_vars(p: BivariatePoly) -> BivariatePoly:
    return BivariatePoly._trusted({Monomial(m[1], m[0]): c for m, c in p.terms.items()})


def canonical_form(p: BivariatePoly) -> BivariatePoly:
    """The smaller of ``p`` and ``swap_vars(p)`` under :meth:`BivariatePoly.sort_key`."""
    s = swap_vars(p)
    return p if p.sort_key() <= s.sort_key() else s


# --- group-invariant family -------------------------------------------------


def invariant_coefficient(d: int, s: int) -> Fraction:
    """Coefficient of ``x^(d-2s) y^s`` in the invariant polynomial of degree ``d``."""
    if s == 0:
        return Fraction(1)
    return Fraction(d, s) * comb(d - 1 - s, s - 1)


def invariant_sharp(d: int) -> BivariatePoly:
    """The group-invariant sharp polynomial of odd degree ``d``."""
    if d < 1 or d % 2 == 0:
        raise ValueError(f"invariant_sharp needs an odd positive degree, got {d}")
    terms = {(d - 2 * s, s): invariant_coefficient(d, s) for s in range(0, (d - 1) // 2 + 1)}
    terms[(0, d)] = Fraction(1)
    return BivariatePoly.from_terms(terms)


def conjugate_expansion(d: int) -> BivariatePoly:
    """Expand ``((x+r)/2)^d + ((x-r)/2)^d + (-1)^(d+1) y^d`` with ``r^2 = x^2 + 4y``.

    Odd powers of ``r`` cancel between the conjugates, so only
    ``r^(2i) = (x^2 + 4y)^i`` survives and the result is a polynomial.
    """
    if d < 1:
        raise ValueError("degree must be positive")
    r2 = X * X + Y * 4
    acc = BivariatePoly.zero()
    r2_pow = ONE
    for i in range(0, d // 2 + 1):
        acc = acc + r2_pow.shift(d - 2 * i, 0, comb(d, 2 * i))
        r2_pow = r2_pow * r2
    acc = acc * Fraction(2, 2 ** d)
    sign = 1 if (d + 1) % 2 == 0 else -1
    return acc + BivariatePoly.monomial(0, d, sign)


@lru_cache(maxsize=None)
def invariant_even(m: int) -> BivariatePoly:
    """The even-degree member of the invariant family (it has a ``-y^m`` term)."""
    if m < 2 or m % 2:
        raise ValueError(f"invariant_even needs an even degree >= 2, got {m}")
    return conjugate_expansion(m)


# --- text grammar -----------------------------------------------------------

_TERM_RE = re.compile(
    r"""^(?P<num>\d+)?(?:/(?P<den>\d+))?
        (?:x(?:\^(?P<xe>\d+))?)?
        (?:y(?:\^(?P<ye>\d+))?)?$""",
    re.VERBOSE,
)


def parse_poly(text: str) -> BivariatePoly:
    """Parse the ``"x^7 + 7/2x^5y - y^2"`` style grammar."""
    s = text.replace(" ", "").replace("*", "")
    if not s:
        raise ValueError("empty polynomial")
    if s[0] not in "+-":
        s = "+" + s
    pieces = re.findall(r"([+-])([^+-]+)", s)
    if "".join(sign + body for sign, body in pieces) != s:
        raise ValueError(f"cannot parse polynomial {text!r}")
    acc: List[Tuple[Tuple[int, int], Fraction]] = []
    for sign, body in pieces:
        mt = _TERM_RE.match(body)
        if not mt or (mt.group("den") and not mt.group("num")):
            raise ValueError(f"bad term {body!r} in {text!r}")
        num, den = mt.group("num"), mt.group("den")
        has_x = "x" in body
        has_y = "y" in body
        if num is None and not (has_x or has_y):
            raise ValueError(f"bad term {body!r} in {text!r}")
        c = Fraction(int(num) if num else 1, int(den) if den else 1)
        j = (int(mt.group("xe")) if mt.group("xe") else 1) if has_x else 0
        k = (int(mt.group("ye")) if mt.group("ye") else 1) if has_y else 0
        acc.append(((j, k), -c if sign == "-" else c))
    return BivariatePoly.from_terms(acc)


def _display_key(m: Monomial) -> Tuple[int, int]:
    # x-power descending, then y-power ascending: the usual printed order
    return (-m[0], m[1])


def format_poly(p: BivariatePoly) -> str:
    if p.is_zero():
        return "0"
    parts: List[str] = []
    for m, c in sorted(p.terms.items(), key=lambda t: _display_key(t[0])):
        mag = abs(c)
        var = ""
        if m.j:
            var += "x" if m.j == 1 else f"x^{m.j}"
        if m.k:
            var += "y" if m.k == 1 else f"y^{m.k}"
        coef = "" if (mag == 1 and var) else str(mag)
        body = coef + var
        if not parts:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts)
