from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from sharppoly.constructor import (
    SubstitutionParams,
    compose_even,
    even_closure,
    nonunique_clauses,
    pell_by_recurrence,
    pell_degrees,
    scan_degree,
    substitute,
    substitution_grid,
)
from sharppoly.corpus import A143105, EVEN_RAW_COUNTS, ODD_RAW_COUNTS, sharp_fixtures
from sharppoly.exactpoly import X, Y, BivariatePoly, canonical_form, invariant_even, invariant_sharp, is_member, parse_poly
from sharppoly.report import swap_closure


def raw_odd(d):
    return swap_closure(sharp_fixtures(d))


def raw_odd_by_degree(d_max):
    return {d: raw_odd(d) for d in range(1, d_max, 2)}


def test_compose_smallest():
    assert compose_even(X + Y, X + Y) == parse_poly("x + xy + y^2")
    f3 = invariant_sharp(3)
    assert compose_even(X + Y, f3) == parse_poly("x + x^3y + 3xy^2 + y^4")
    assert compose_even(f3, X + Y) == parse_poly("x^3 + 3xy + xy^3 + y^4")


def test_compose_rejects_bad_inputs():
    with pytest.raises(ValueError):
        compose_even((X + Y) ** 2, X + Y)
    with pytest.raises(ValueError):
        compose_even((X + Y) ** 3, X + Y)  # a member, but not sharp


@pytest.mark.parametrize("d", [4, 6, 8, 10, 12])
def test_closure_counts(d):
    out = even_closure(d, raw_odd_by_degree(d))
    assert len(out) == EVEN_RAW_COUNTS[(d + 4) // 2]
    assert all(is_member(p, d) and p.term_count == (d + 4) // 2 for p in out)


@pytest.mark.parametrize("N", [4, 5, 6, 7, 8])
def test_even_count_is_a_convolution_of_odd_counts(N):
    # even degree 2N - 4 splits as (2i - 3) + (2j - 3) with i + j = N + 1, swaps doubling
    conv = sum(ODD_RAW_COUNTS[i] * ODD_RAW_COUNTS[N + 1 - i] for i in range(2, N))
    assert EVEN_RAW_COUNTS[N] == 2 * conv


@pytest.mark.parametrize("d", [4, 6, 8])
def test_closure_equals_enumeration(d, cached):
    rep = cached["sharp_nullspace"](d)
    got = sorted(map(str, rep.raw))
    assert got == sorted(map(str, even_closure(d, raw_odd_by_degree(d))))


def test_params_validation():
    with pytest.raises(ValueError):
        SubstitutionParams(3, 0, 0, Fraction(1))
    with pytest.raises(ValueError):
        SubstitutionParams(2, -1, 0, Fraction(1))
    with pytest.raises(ValueError):
        SubstitutionParams(2, 0, 0, Fraction(-1))


def test_degree_seven_example():
    cand = substitute(invariant_sharp(7), SubstitutionParams(2, 3, 1, Fraction(7)))
    assert cand.accepted
    assert cand.poly == parse_poly("x^7 + 7x^3y + 7x^3y^3 + 7xy^3 + y^7")
    assert is_member(cand.poly, 7)


@given(st.sampled_from([3, 5, 7, 9, 11]), st.sampled_from([2, 4, 6]), st.integers(0, 5), st.integers(0, 5),
       st.fractions(min_value=0, max_value=40, max_denominator=4))
def test_two_forms_of_the_substitution_agree(d, m, j, k, c):
    # subtracting c x^j y^k (f_m - 1) is the same as swapping the tilde block for c x^j y^k (1 + y^m)
    assume(m < d and j + k + m <= d)
    params = SubstitutionParams(m, j, k, c)
    f = invariant_sharp(d)
    fm = invariant_even(m)
    tilde = fm + Y ** m
    other = f + (1 + Y ** m - tilde).shift(j, k, c)
    cand = substitute(f, params)
    assert cand.poly == other == f - (fm - 1).shift(j, k, c)
    if cand.accepted:
        assert is_member(cand.poly, d) and cand.poly.term_count == f.term_count


def test_grid_is_finite_and_valid():
    grid = list(substitution_grid(invariant_sharp(9), 9))
    assert grid
    assert all(p.m % 2 == 0 and p.m < 9 and p.c > 0 for p in grid)


def test_scan_nine_finds_nothing():
    rec = scan_degree(9)
    assert not rec.found_noninvariant and rec.params is None


def test_scan_thirteen_needs_the_corrected_coefficient():
    rec = scan_degree(13)
    assert rec.found_noninvariant
    assert canonical_form(rec.polynomial) in sharp_fixtures(13)
    assert rec.to_json()["params"][0]["m"] >= 2


def test_scan_rejects_even_degrees_and_oversized_blocks():
    with pytest.raises(ValueError):
        scan_degree(8)
    with pytest.raises(ValueError):
        substitute(invariant_sharp(3), SubstitutionParams(4, 0, 0, Fraction(1)))


@pytest.mark.slow
@pytest.mark.parametrize("d", [65, 257])
def test_scan_beyond_the_list(d):
    assert scan_degree(d).found_noninvariant


def test_scan_list_members_are_exactly_the_unfound(cached):
    # the full run to 149 lives in the acceptance suite
    records = cached["scan_to"](49)
    assert tuple(r.degree for r in records if not r.found_noninvariant) == tuple(d for d in A143105 if d <= 49)
    for r in records:
        if r.found_noninvariant:
            assert is_member(r.polynomial, r.degree)
            assert r.polynomial.term_count == (r.degree + 3) // 2
            assert canonical_form(r.polynomial) != canonical_form(invariant_sharp(r.degree))


def test_pell():
    assert pell_degrees(5) == pell_by_recurrence(5) == [7, 97, 1351, 18817, 262087]
    assert pell_degrees(1) == [7]
    with pytest.raises(ValueError):
        pell_degrees(0)


@given(st.integers(1, 30))
def test_pell_forms_agree(n):
    assert pell_degrees(n) == pell_by_recurrence(n)


def test_nonunique_clauses():
    table = nonunique_clauses(100)
    assert table[19] == {"ii", "iv"}
    assert table[21] == set() and table[9] == set() and table[1] == set()
    assert table[7] == {"ii", "iii", "iv"}
    assert table[97] == {"iii", "iv"}
    assert table[10] == {"i"}
