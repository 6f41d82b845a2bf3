"""Embedded regression fixtures: known sharp polynomials, counts and sequences.

Everything here is short and exact, so it lives in the repository and the
tests never fetch anything.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from .exactpoly import BivariatePoly, canonical_form, parse_poly
from .report import canonical_set

__all__ = [
    "SHARP_ODD",
    "ODD_RAW_COUNTS",
    "EVEN_RAW_COUNTS",
    "NEAR_SHARP_COUNTS",
    "A143105",
    "A143106",
    "PELL_DEGREES",
    "CorpusMismatch",
    "sharp_fixtures",
    "compare_with_fixtures",
]

#: every sharp polynomial of odd degree d <= 17, one per swap class
SHARP_ODD: Dict[int, Tuple[str, ...]] = {
    1: ("x + y",),
    3: ("x^3 + 3xy + y^3",),
    5: ("x^5 + 5x^3y + 5xy^2 + y^5",),
    7: (
        "x^7 + 7x^3y + 14x^2y^3 + 7xy^5 + y^7",
        "x^7 + 7x^3y + 7x^3y^3 + 7xy^3 + y^7",
        "x^7 + 7/2x^5y + 7/2xy + 7/2xy^5 + y^7",
    ),
    9: ("x^9 + 9x^7y + 27x^5y^2 + 30x^3y^3 + 9xy^4 + y^9",),
    11: (
        "x^11 + 11x^9y + 44x^7y^2 + 77x^5y^3 + 55x^3y^4 + 11xy^5 + y^11",
        "x^11 + 11x^5y + 11x^5y^5 + 55x^4y^3 + 55x^3y^5 + 11xy^5 + y^11",
    ),
    13: (
        "x^13 + 13x^11y + 65x^9y^2 + 156x^7y^3 + 182x^5y^4 + 91x^3y^5 + 13xy^6 + y^13",
        # commonly printed with 92/2 on x^3y^3, which is not constant on the line
        "x^13 + 13x^11y + 65x^9y^2 + 221/2x^7y^3 + 91/2x^3y^3 + 91/2x^3y^7 + 13xy^6 + y^13",
        "x^13 + 234/25x^11y + 143/5x^8y^2 + 143/5x^7y^4 + 91/25xy + 143/25xy^6 + 91/25xy^11 + y^13",
        "x^13 + 234/25x^11y + 143/5x^9y^2 + 143/5x^7y^3 + 91/25xy + 143/25xy^6 + 91/25xy^11 + y^13",
    ),
    15: (
        "x^15 + 15x^13y + 90x^11y^2 + 275x^9y^3 + 450x^7y^4 + 378x^5y^5 + 140x^3y^6 + 15xy^7 + y^15",
        "x^15 + 140x^9y^3 + 15x^7y + 420x^7y^4 + 15x^7y^7 + 378x^5y^5 + 140x^3y^6 + 15xy^7 + y^15",
    ),
    17: (
        "x^17 + 17x^15y + 119x^13y^2 + 442x^11y^3 + 935x^9y^4 + 1122x^7y^5 + 714x^5y^6 + 204x^3y^7 + 17xy^8 + y^17",
    ),
}

#: raw (swap-distinct) sharp counts in odd degree d = 2N - 3, keyed by N
ODD_RAW_COUNTS: Dict[int, int] = {2: 1, 3: 1, 4: 2, 5: 4, 6: 2, 7: 4, 8: 8, 9: 4, 10: 2}

#: raw sharp counts in even degree d = 2N - 4, keyed by N
EVEN_RAW_COUNTS: Dict[int, int] = {2: 0, 3: 3, 4: 4, 5: 10, 6: 24, 7: 32, 8: 56}

#: raw counts of isolated members with N terms in degree d = 2N - 5, keyed by N
NEAR_SHARP_COUNTS: Dict[int, int] = {2: 0, 3: 0, 4: 11, 5: 38, 6: 88, 7: 198}

#: odd degrees <= 149 where no substitution step leaves f_d
A143105: Tuple[int, ...] = (
    1, 3, 5, 9, 17, 21, 33, 41, 45, 53, 69, 77, 81, 93, 105, 113, 117, 125, 129, 141, 149,
)

#: degrees where uniqueness is known to hold
A143106: Tuple[int, ...] = (1, 3, 5, 9, 17)

PELL_DEGREES: Tuple[int, ...] = (7, 97, 1351, 18817, 262087)


class CorpusMismatch(AssertionError):
    def __init__(self, degree: int, missing: Sequence[BivariatePoly], extra: Sequence[BivariatePoly]):
        self.degree = degree
        self.missing = list(missing)
        self.extra = list(extra)
        super().__init__(f"degree {degree}: missing {[str(p) for p in missing]}, unexpected {[str(p) for p in extra]}")


def sharp_fixtures(d: int) -> List[BivariatePoly]:
    """Canonical, sorted fixture set for odd ``d``; ``KeyError`` if none is stored."""
    return canonical_set([parse_poly(s) for s in SHARP_ODD[d]])


def compare_with_fixtures(d: int, found: Sequence[BivariatePoly]) -> None:
    """Raise ``CorpusMismatch`` unless ``found`` equals the fixtures up to swap."""
    want = set(sharp_fixtures(d))
    got = {canonical_form(p) for p in found}
    if want != got:
        key = BivariatePoly.sort_key
        raise CorpusMismatch(d, sorted(want - got, key=key), sorted(got - want, key=key))
