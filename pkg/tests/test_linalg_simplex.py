from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sharppoly.linalg import RationalMatrix, fraction_free_reduce, nullspace, rank, rank_mod_p
from sharppoly.simplex import PivotBudgetExceeded, feasible_point

int_matrix = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 7).flatmap(
        lambda c: st.lists(st.lists(st.integers(-4, 4), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


def rank_by_column_pivoting(rows):
    # independent elimination: rational arithmetic, largest-magnitude pivot per column
    m = [[Fraction(v) for v in row] for row in rows]
    r = 0
    for c in range(len(m[0])):
        piv = max(range(r, len(m)), key=lambda i: abs(m[i][c]), default=None)
        if piv is None or m[piv][c] == 0:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
    return r


def test_two_by_two_kernel():
    basis = nullspace([[-1, 3], [-1, 3]])
    assert basis == [[Fraction(3), Fraction(1)]]


def test_identity_has_no_kernel():
    assert nullspace([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == []


def test_empty_rows_need_column_count():
    assert len(nullspace([], cols=3)) == 3
    with pytest.raises(ValueError):
        RationalMatrix.from_rows([])


def test_rational_entries():
    m = RationalMatrix.from_rows([[Fraction(1, 2), Fraction(1, 3)], [1, Fraction(2, 3)]])
    assert len(nullspace(m)) == 1
    for v in nullspace(m):
        assert m.apply(v) == [0, 0]


@given(int_matrix)
def test_kernel_vectors_are_annihilated(rows):
    m = RationalMatrix.from_rows(rows)
    basis = nullspace(m)
    for v in basis:
        assert all(x == 0 for x in m.apply(v))
        last = [x for x in v if x != 0][-1]
        assert last > 0
    assert len(basis) == m.cols - rank_by_column_pivoting(rows)
    assert rank(m) == rank_by_column_pivoting(rows)


@given(int_matrix, st.sampled_from([2, 3, 19, 10007]))
def test_rank_mod_p_never_exceeds_rational_rank(rows, p):
    assert rank_mod_p(rows, p) <= rank(rows)


@given(st.lists(st.lists(st.integers(-5, 5), min_size=2, max_size=2), min_size=3, max_size=4))
def test_partial_reduction_records_the_row_transform(rows):
    # reduce [B | I] on B only: the identity block is the transform T with T B = reduced B
    n = len(rows)
    aug = [r + [int(i == j) for j in range(n)] for i, r in enumerate(rows)]
    red, pivots, det = fraction_free_reduce([list(r) for r in aug], pivot_cols=2)
    assert all(c < 2 for c in pivots)
    for out in red:
        t = out[2:]
        assert [sum(t[i] * rows[i][c] for i in range(n)) for c in range(2)] == out[:2]
    for r in range(len(pivots), n):
        assert red[r][:2] == [0, 0]


def test_rank_drops_mod_a_dividing_prime():
    assert rank_mod_p([[19, 0], [0, 1]], 19) == 1
    assert rank([[19, 0], [0, 1]]) == 2


# --- simplex -----------------------------------------------------------------


def test_feasible_point_is_exact():
    res = feasible_point(3, eq=[([1, 1, 1], 1), ([1, -1, 0], Fraction(1, 3))])
    assert res.feasible
    x = res.point
    assert sum(x) == 1 and x[0] - x[1] == Fraction(1, 3) and min(x) >= 0


def test_infeasible_system():
    assert not feasible_point(2, eq=[([1, 1], -1)]).feasible
    assert not feasible_point(2, eq=[([1, 1], 3)], upper=[1, 1]).feasible
    assert not feasible_point(1, le=[([1], -1)]).feasible


def test_upper_bounds_and_inequalities():
    res = feasible_point(2, eq=[([1, 1], 3)], le=[([1, 0], 1)], upper=[None, 2])
    assert res.feasible and res.point[0] <= 1 and res.point[1] <= 2 and sum(res.point) == 3


def test_zero_upper_bound_pins_variable():
    res = feasible_point(2, eq=[([1, 1], 1)], upper=[0, None])
    assert res.feasible and res.point == [0, 1]


def test_pivot_budget_is_enforced():
    rows = [([1 if j <= i else 0 for j in range(8)], i + 1) for i in range(8)]
    with pytest.raises(PivotBudgetExceeded):
        feasible_point(8, eq=rows, pivot_budget=1)


@given(
    st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=4),
    st.lists(st.integers(0, 3), min_size=4, max_size=4),
)
def test_simplex_agrees_with_a_known_feasible_point(a, x0):
    # rows built from a nonnegative x0 are feasible by construction
    eq = [(row, sum(c * v for c, v in zip(row, x0))) for row in a]
    res = feasible_point(4, eq=eq)
    assert res.feasible
    for row, rhs in eq:
        assert sum(c * v for c, v in zip(row, res.point)) == rhs
    assert min(res.point) >= 0
