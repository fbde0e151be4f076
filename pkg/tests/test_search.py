"""Family enumeration, exhaustive oracles, budgets, and the sampling probe."""

import itertools

import pytest

from signedsum import (
    BudgetExceededError,
    ElementSet,
    Family,
    InfeasibleFamilyError,
    ParameterError,
    abelian_group_specs,
    classify_symmetry,
    enumerate_family,
    family_cardinality,
    h_fold_signed_sumset,
    h_fold_sumset,
    make_search_space,
    min_signed_oracle,
    min_sumset_oracle,
    min_sumset_size,
    parse_group,
    sample_upper_bound,
    signed_size_bound,
)

from reference import min_signed_naive, symmetry_tag_naive


def test_search_space_partition():
    g = parse_group("Z2xZ6")
    space = make_search_space(g, 3, Family.MINIMIZER)
    assert len(space.involutions) + 2 * len(space.pairs) == g.order
    with pytest.raises(ParameterError):
        make_search_space(g, 13, Family.ALL)


def test_enumerate_family_z5_examples():
    g = parse_group("Z5")
    sym = [s.indices() for s in enumerate_family(make_search_space(g, 2, Family.SYM))]
    assert sorted(sym) == [(1, 4), (2, 3)]
    asym = [s.indices() for s in enumerate_family(make_search_space(g, 2, Family.ASYM))]
    assert len(asym) == 4
    assert sorted(asym) == [(1, 2), (1, 3), (2, 4), (3, 4)]
    nsym = [s.indices() for s in enumerate_family(make_search_space(g, 2, Family.NSYM))]
    assert sorted(nsym) == [(0, 1), (0, 2), (0, 3), (0, 4)]


@pytest.mark.parametrize("literal", ["Z8", "Z12", "Z15", "Z2xZ6", "Z3xZ3"])
def test_family_streams_unique_and_classified(literal):
    g = parse_group(literal)
    tags = {Family.SYM: "sym", Family.NSYM: "nsym", Family.ASYM: "asym"}
    for m in range(1, g.order + 1):
        union_seen = set()
        for family, tag in tags.items():
            space = make_search_space(g, m, family)
            seen = set()
            for s in enumerate_family(space):
                assert s.card == m
                assert s.mask not in seen
                seen.add(s.mask)
                got = symmetry_tag_naive(g.factors, s.indices())
                if m == 1 and tag == "asym":
                    assert got in ("nsym", "asym")
                else:
                    assert got == tag, (literal, m, s.indices())
            union_seen |= seen
            # counts match the closed-form estimate except the nsym upper bound
            if family is not Family.NSYM:
                assert len(seen) == family_cardinality(space)
            else:
                assert len(seen) <= family_cardinality(space)
        whole = {
            s.mask for s in enumerate_family(make_search_space(g, m, Family.MINIMIZER))
        }
        stream = list(enumerate_family(make_search_space(g, m, Family.MINIMIZER)))
        assert len(stream) == len(whole), "minimizer stream must be duplicate-free"
        assert whole == union_seen


def test_family_stream_matches_definition_exhaustively():
    g = parse_group("Z3xZ3")
    for m in range(1, 10):
        stream = {
            s.mask for s in enumerate_family(make_search_space(g, m, Family.MINIMIZER))
        }
        expected = set()
        for ids in itertools.combinations(range(9), m):
            if symmetry_tag_naive(g.factors, ids) != "none":
                mask = 0
                for i in ids:
                    mask |= 1 << i
                expected.add(mask)
        assert stream == expected


def test_shards_partition_stream():
    g = parse_group("Z12")
    space = make_search_space(g, 4, Family.MINIMIZER)
    full = [s.mask for s in enumerate_family(space)]
    pieces = [
        [s.mask for s in enumerate_family(space, shard_index=i, shard_count=3)]
        for i in range(3)
    ]
    assert sorted(full) == sorted(m for piece in pieces for m in piece)
    with pytest.raises(ParameterError):
        list(enumerate_family(space, shard_index=3, shard_count=3))


def test_min_sumset_oracle_examples():
    g = parse_group("Z3xZ3")
    r = min_sumset_oracle(g, 4, 2)
    assert r.value == 7 == min_sumset_size(9, 4, 2)
    assert r.witness.card == 4 and 0 in r.witness
    assert min_sumset_oracle(parse_group("Z5"), 3, 2).value == 5
    assert min_sumset_oracle(parse_group("Z7"), 1, 4).value == 1


def test_min_sumset_oracle_matches_formula_small():
    for n in range(2, 11):
        for g in abelian_group_specs(n):
            for m in range(1, n + 1):
                for h in (2, 3):
                    assert min_sumset_oracle(g, m, h).value == min_sumset_size(n, m, h)


def test_min_signed_oracle_examples():
    assert min_signed_oracle(parse_group("Z3xZ3"), 4, 2).value == 8
    assert min_signed_oracle(parse_group("Z9"), 4, 2).value == 7
    assert min_signed_oracle(parse_group("Z5^2"), 6, 2).value == 15


def test_min_signed_oracle_witness_validity():
    g = parse_group("Z3xZ3")
    for m in range(1, 10):
        for h in (2, 3):
            r = min_signed_oracle(g, m, h)
            recomputed = h_fold_signed_sumset(g, r.witness, h)
            assert len(recomputed) == r.value
            assert r.witness.card == m
            assert classify_symmetry(g, r.witness).value == r.witness_family


def test_min_signed_oracle_all_sets_equals_family():
    for literal in ["Z5", "Z7", "Z8", "Z2xZ4"]:
        g = parse_group(literal)
        for m in range(1, g.order + 1):
            a = min_signed_oracle(g, m, 2, family=Family.ALL)
            b = min_signed_oracle(g, m, 2, family=Family.MINIMIZER)
            assert a.value == b.value, (literal, m)


def test_min_signed_oracle_matches_naive():
    for literal in ["Z6", "Z3xZ3", "Z2xZ4"]:
        g = parse_group(literal)
        for m in range(1, g.order + 1):
            got = min_signed_oracle(g, m, 2).value
            assert got == min_signed_naive(g.factors, m, 2), (literal, m)


def test_oracle_value_bounds():
    for literal in ["Z9", "Z3xZ3", "Z2xZ6", "Z12"]:
        g = parse_group(literal)
        n = g.order
        for m in range(1, n + 1):
            for h in (2, 3):
                signed = min_signed_oracle(g, m, h).value
                plain = min_sumset_oracle(g, m, h).value
                assert plain <= signed <= signed_size_bound(g, m, h)


def test_budget_refusal():
    g = parse_group("Z5^2")
    with pytest.raises(BudgetExceededError):
        min_signed_oracle(g, 8, 2, budget=1000)
    with pytest.raises(BudgetExceededError):
        min_sumset_oracle(g, 12, 2, budget=1000)


def test_budget_env_override(monkeypatch):
    from signedsum.search import BUDGET_ENV, default_budget

    monkeypatch.setenv(BUDGET_ENV, "12345")
    assert default_budget() == 12345
    monkeypatch.setenv(BUDGET_ENV, "junk")
    with pytest.raises(ParameterError):
        default_budget()


def test_infeasible_family():
    g = parse_group("Z5")
    with pytest.raises(InfeasibleFamilyError):
        min_signed_oracle(g, 3, 2, family=Family.ASYM)  # only 2 inverse pairs
    # near-symmetric sets of size n cannot exist (the whole group is symmetric)
    with pytest.raises(InfeasibleFamilyError):
        min_signed_oracle(g, 5, 2, family=Family.NSYM)


def test_oracle_determinism_and_shards():
    g = parse_group("Z3xZ3")
    a = min_signed_oracle(g, 4, 2)
    b = min_signed_oracle(g, 4, 2)
    assert a == b
    parts = [
        min_signed_oracle(g, 4, 2, shard_index=i, shard_count=4) for i in range(4)
    ]
    assert min(p.value for p in parts) == a.value
    assert min((p.value, p.witness.mask) for p in parts) == (a.value, a.witness.mask)
    assert sum(p.enumerated for p in parts) == a.enumerated


def test_orbit_reduction_matches_unreduced():
    g3 = parse_group("Z3^2")
    for m in range(1, 10):
        for h in (2, 3):
            a = min_signed_oracle(g3, m, h)
            b = min_signed_oracle(g3, m, h, use_orbit_reduction=True)
            assert a.value == b.value
            assert b.enumerated <= a.enumerated
    g5 = parse_group("Z5^2")
    for m in (2, 3, 4):
        assert (
            min_signed_oracle(g5, m, 2).value
            == min_signed_oracle(g5, m, 2, use_orbit_reduction=True).value
        )


def test_sample_upper_bound_examples():
    g = parse_group("Z3xZ3")
    assert sample_upper_bound(g, 4, 2, trials=100, seed=1) >= 8
    assert sample_upper_bound(parse_group("Z5"), 2, 2, trials=100, seed=1) == 3
    assert sample_upper_bound(parse_group("Z7"), 1, 5, trials=1, seed=0) == 1


def test_sample_upper_bound_reproducible_and_sound():
    g = parse_group("Z2xZ6")
    for m in range(1, 13):
        v1 = sample_upper_bound(g, m, 2, trials=50, seed=9)
        v2 = sample_upper_bound(g, m, 2, trials=50, seed=9)
        assert v1 == v2
        exact = min_signed_oracle(g, m, 2).value
        assert v1 >= exact
        # structured candidates keep the probe at or below the divisor bound
        assert v1 <= signed_size_bound(g, m, 2)


def test_zero_fold_and_one_fold_oracles():
    g = parse_group("Z3xZ3")
    assert min_signed_oracle(g, 4, 0).value == 1
    assert min_signed_oracle(g, 4, 1).value == 4
    assert min_sumset_oracle(g, 4, 0).value == 1
    assert min_sumset_oracle(g, 4, 1).value == 4
