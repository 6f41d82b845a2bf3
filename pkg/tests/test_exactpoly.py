from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sharppoly.exactpoly import (
    ONE,
    X,
    Y,
    BivariatePoly,
    Monomial,
    NotConstantOnLine,
    canonical_form,
    conjugate_expansion,
    format_poly,
    invariant_coefficient,
    invariant_even,
    invariant_sharp,
    is_member,
    monomials_of_degree,
    parse_poly,
    quotient_q,
    restrict_to_line,
    swap_vars,
)

small_frac = st.fractions(min_value=-20, max_value=20, max_denominator=12)
exps = st.tuples(st.integers(0, 6), st.integers(0, 6))
polys = st.dictionaries(exps, small_frac, max_size=8).map(BivariatePoly.from_terms)


@st.composite
def members(draw):
    """Split terms ``c m -> t c m x + t c m y + (1-t) c m``, starting from 1."""
    p = ONE
    for _ in range(draw(st.integers(1, 7))):
        terms = p.sorted_terms()
        m, c = terms[draw(st.integers(0, len(terms) - 1))]
        t = draw(st.fractions(min_value=Fraction(1, 5), max_value=1, max_denominator=5))
        piece = BivariatePoly.monomial(m.j, m.k, t * c)
        p = p - piece + piece * (X + Y)
    return p


def on_line_by_evaluation(p):
    # independent route: a polynomial of degree <= D that is 1 at D+1 points is 1
    if p.is_zero():
        return False
    n = int(p.degree) + 1
    return all(p(Fraction(i, n + 1), 1 - Fraction(i, n + 1)) == 1 for i in range(n + 1))


def test_graded_monomial_order():
    assert monomials_of_degree(3) == [Monomial(3, 0), Monomial(2, 1), Monomial(1, 2), Monomial(0, 3)]


def test_zero_coefficients_are_dropped():
    p = BivariatePoly.from_terms({(1, 0): 2, (0, 1): 0, (2, 2): Fraction(0)})
    assert p.term_count == 1 and p.support == {Monomial(1, 0)}


def test_negative_exponent_rejected():
    with pytest.raises(ValueError):
        BivariatePoly.from_terms({(-1, 0): 1})


def test_arithmetic():
    assert (X + Y) ** 2 == parse_poly("x^2 + 2xy + y^2")
    assert (X + Y) * (X - Y) == X * X - Y * Y
    assert (X + 1 - X).is_zero() is False and (X - X).is_zero()
    assert X.shift(1, 2, Fraction(3, 2)) == parse_poly("3/2x^2y^2")


def test_restriction_of_f3():
    assert restrict_to_line(parse_poly("x^3 + 3xy + y^3")).is_constant(1)


def test_membership_reports_each_failure():
    rep = is_member(parse_poly("x^2 + 2xy - y"), 2)
    assert not rep and not rep.nonnegative and not rep.constant_on_line
    assert is_member(parse_poly("x + y"), 1)
    assert not is_member(parse_poly("x + y"), 2).degree_ok


@given(members())
def test_generated_members_pass(p):
    assert is_member(p, int(p.degree))


@given(polys)
def test_membership_matches_independent_checks(p):
    if p.is_zero():
        return
    d = int(p.degree)
    expected = on_line_by_evaluation(p) and all(c >= 0 for c in p.terms.values())
    assert bool(is_member(p, d)) == expected


@given(members())
def test_quotient_division_is_exact(p):
    q = quotient_q(p)
    assert (X + Y - 1) * q + 1 == p
    assert q.is_zero() or q.degree == p.degree - 1


@given(polys)
def test_quotient_rejects_nonmembers(p):
    if on_line_by_evaluation(p):
        return
    with pytest.raises(NotConstantOnLine):
        quotient_q(p)


@given(polys)
def test_swap_is_an_involution(p):
    assert swap_vars(swap_vars(p)) == p
    assert canonical_form(p) == canonical_form(swap_vars(p))
    assert canonical_form(canonical_form(p)) == canonical_form(p)


@given(polys)
def test_text_round_trip(p):
    assert parse_poly(format_poly(p)) == p


@pytest.mark.parametrize("bad", ["", "x^", "3/x", "x + + y", "2y^x", "/2x"])
def test_parse_errors(bad):
    with pytest.raises(ValueError):
        parse_poly(bad)


def test_display_order():
    assert format_poly(parse_poly("y^7 + 7xy^5 + x^7")) == "x^7 + 7xy^5 + y^7"
    assert format_poly(parse_poly("7/2xy + x^7")) == "x^7 + 7/2xy"


def test_invariant_examples():
    assert invariant_sharp(3) == parse_poly("x^3 + 3xy + y^3")
    assert invariant_sharp(7) == parse_poly("x^7 + 7x^5y + 14x^3y^2 + 7xy^3 + y^7")
    assert invariant_coefficient(17, 5) == 1122
    with pytest.raises(ValueError):
        invariant_sharp(4)


@pytest.mark.parametrize("d", range(1, 40, 2))
def test_invariant_closed_form_matches_conjugate_expansion(d):
    f = invariant_sharp(d)
    assert f == conjugate_expansion(d)
    assert is_member(f, d)
    assert f.term_count == (d + 3) // 2
    assert f.is_symmetric() is (d <= 3)


@pytest.mark.parametrize("m", range(2, 24, 2))
def test_even_invariant(m):
    fm = invariant_even(m)
    assert restrict_to_line(fm).is_constant(1)
    assert fm.coeff(0, m) == -1
    tilde = fm + Y ** m
    assert all(c > 0 for c in tilde.terms.values())
    assert tilde.coeff(m, 0) == 1
