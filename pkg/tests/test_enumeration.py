"""The pruned support search against an unpruned, independently solved oracle."""
import pytest

from sharppoly.enumeration import (
    _top_mixes_parity,
    adjacent,
    iter_supports,
    run_search,
    shard_units,
    support_space,
    work_units,
)
from sharppoly.exactpoly import Monomial, invariant_sharp, parse_poly
from sharppoly.nullsearch import sharp_config, sharp_term_count, terms_config

from oracles import oracle


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_pruned_search_matches_unpruned_oracle(d):
    want, _ = oracle(d, sharp_term_count(d))
    assert want, "the oracle should find at least one sharp polynomial"
    assert sorted(map(str, run_search(sharp_config(d)).raw)) == want


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_every_oracle_support_survives_the_pruning_rules(d):
    want, _ = oracle(d, sharp_term_count(d))
    kept = {frozenset(s) for s in iter_supports(sharp_config(d))}
    for text in want:
        assert frozenset(parse_poly(text).support) in kept


def test_oracle_isolated_count_with_four_terms_in_degree_three():
    # (x + y)^3 is isolated with four terms, so the full count is twelve
    want, _ = oracle(3, 4)
    assert len(want) == 12 and "x^3 + 3x^2y + 3xy^2 + y^3" in want


@pytest.mark.parametrize("d, n", [(2, 4), (3, 4), (3, 5), (4, 5)])
def test_terms_search_matches_oracle_on_isolated_members(d, n):
    # (4, 5) has isolated members with two pure x terms, so no pure-term pruning may apply here
    want, fams = oracle(d, n)
    rep = run_search(terms_config(d, n))
    assert sorted(map(str, rep.raw)) == want
    assert {frozenset(f.support) for f in rep.families} <= {frozenset(Monomial(*m) for m in s) for s in fams}


def test_adjacency():
    assert adjacent(Monomial(2, 1), Monomial(1, 2))
    assert adjacent(Monomial(3, 0), Monomial(2, 1))
    assert not adjacent(Monomial(2, 1), Monomial(3, 1))
    assert not adjacent(Monomial(3, 0), Monomial(1, 2))
    assert not adjacent(Monomial(2, 1), Monomial(2, 1))


def test_top_parity_rule():
    assert _top_mixes_parity([Monomial(2, 0), Monomial(1, 1)], 2)
    assert not _top_mixes_parity([Monomial(2, 0), Monomial(0, 2), Monomial(1, 0)], 2)


@pytest.mark.parametrize("d", [3, 5, 7])
def test_odd_supports_contain_both_pure_powers(d):
    for s in iter_supports(sharp_config(d)):
        assert Monomial(d, 0) in s and Monomial(0, d) in s
        assert len(s) == sharp_term_count(d)


def test_invariant_support_is_enumerated():
    f = invariant_sharp(9)
    assert tuple(sorted(f.support)) in {tuple(sorted(s)) for s in iter_supports(sharp_config(9))}


@pytest.mark.parametrize("k", [1, 2, 3, 7])
def test_shard_units_partition(k):
    units = work_units(support_space(sharp_config(11)))
    slices = [shard_units(units, (i, k)) for i in range(k)]
    assert [u for s in slices for u in s] == list(units)


@pytest.mark.parametrize("shard", [(1, 1), (-1, 2), (0, 0)])
def test_bad_shards(shard):
    with pytest.raises(ValueError):
        shard_units([], shard)


def test_audit_sample_is_seeded():
    a = run_search(sharp_config(9))
    b = run_search(sharp_config(9))
    assert a.stats == b.stats


def test_terms_config_families():
    rep = run_search(terms_config(2, 4))
    assert rep.families and all(f.nullspace_dim >= 2 for f in rep.families)
