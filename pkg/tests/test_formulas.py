"""Closed-form minimum sizes, digit profiles, and conjectured values."""

import pytest

from signedsum import (
    EqualityCertificate,
    ParameterError,
    abelian_group_specs,
    bounds_coincide,
    conjectured_rank2_size,
    conjectured_signed_size,
    digit_profile,
    divisor_term,
    divisors,
    equality_certificate,
    feasible_divisors,
    min_sumset_minimizers,
    min_sumset_size,
    parse_group,
    rank2_equality,
    scale_profile,
    signed_bound_minimizer_exponents,
    signed_size_bound,
    signed_size_bound_minimizers,
    sumset_minimizer_exponents,
)


def test_divisor_term_examples():
    assert divisor_term(1, 4, 2) == 7
    assert divisor_term(3, 4, 2) == 9
    for d in (1, 2, 5, 9):
        assert divisor_term(d, 1, 3) == d


def test_divisor_term_linear_regression():
    # pinned form: the d = 1 term is h*m - h + 1 (and ceil is over m/d)
    for m in range(1, 40):
        for h in range(1, 7):
            assert divisor_term(1, m, h) == h * m - h + 1


def test_divisor_term_overflow():
    with pytest.raises(OverflowError):
        divisor_term(1, 1 << 62, 4)
    with pytest.raises(OverflowError):
        divisor_term(1 << 63, 2, 2)
    with pytest.raises(ParameterError):
        divisor_term(0, 3, 2)


def test_min_sumset_size_examples():
    assert min_sumset_size(9, 4, 2) == 7
    assert min_sumset_size(27, 13, 2) == 25
    assert min_sumset_size(5, 3, 2) == 5
    assert min_sumset_minimizers(9, 4, 2) == [1]
    assert min_sumset_minimizers(9, 5, 2) == [1, 3, 9]


def test_prime_order_two_fold_closed_form():
    # for prime p the two-fold minimum collapses to min(p, 2m - 1)
    for p in (3, 5, 7, 11, 13):
        for m in range(1, p + 1):
            assert min_sumset_size(p, m, 2) == min(p, 2 * m - 1)


def test_trivial_folds():
    g = parse_group("Z3xZ3")
    for m in range(1, 10):
        assert min_sumset_size(9, m, 0) == 1
        assert min_sumset_size(9, m, 1) == m
        assert signed_size_bound(g, m, 0) == 1
        assert signed_size_bound(g, m, 1) == m
        assert conjectured_signed_size(g, m, 1) == m
    for h in range(0, 6):
        assert min_sumset_size(9, 1, h) == 1
        assert signed_size_bound(g, 1, h) == 1


def test_parameter_errors():
    with pytest.raises(ParameterError):
        min_sumset_size(9, 10, 2)
    with pytest.raises(ParameterError):
        min_sumset_size(9, 0, 2)
    with pytest.raises(ParameterError):
        min_sumset_size(9, 3, -1)


def test_signed_size_bound_examples():
    assert signed_size_bound(parse_group("Z3xZ3"), 4, 2) == 9
    assert signed_size_bound(parse_group("Z9"), 4, 2) == 7
    assert signed_size_bound(parse_group("Z5^2"), 8, 2) == 15
    assert signed_size_bound_minimizers(parse_group("Z5^2"), 8, 2) == [5]


def test_bound_never_below_minimum():
    for n in range(2, 31):
        for g in abelian_group_specs(n):
            for m in range(1, n + 1):
                for h in range(5):
                    assert min_sumset_size(n, m, h) <= signed_size_bound(g, m, h)


def test_minimum_nondecreasing_in_m():
    for n in (12, 16, 25, 27):
        for h in (2, 3, 4):
            values = [min_sumset_size(n, m, h) for m in range(1, n + 1)]
            assert values == sorted(values)


def test_digit_profile_examples():
    prof = digit_profile(3, 3, 13, 2)
    assert prof.digits == (1, 1, 0)
    assert (prof.top, prof.heavy, prof.chain) == (2, -1, -1)
    prof = digit_profile(3, 2, 5, 2)
    assert prof.digits == (1, 1)
    assert (prof.top, prof.heavy, prof.chain) == (1, -1, 1)
    prof = digit_profile(3, 2, 4, 2)
    assert prof.digits == (1, 0)
    assert (prof.top, prof.heavy, prof.chain) == (1, -1, -1)
    with pytest.raises(ParameterError):
        digit_profile(4, 2, 3, 2)
    with pytest.raises(ParameterError):
        digit_profile(2, 2, 3, 2)


def test_minimizer_exponent_examples():
    assert sumset_minimizer_exponents(digit_profile(3, 3, 13, 2)) == {0}
    assert sumset_minimizer_exponents(digit_profile(3, 2, 5, 2)) == {0, 1, 2}
    assert sumset_minimizer_exponents(digit_profile(3, 2, 4, 2)) == {0}
    assert signed_bound_minimizer_exponents(digit_profile(3, 2, 4, 2)) == {1, 2}
    assert signed_bound_minimizer_exponents(digit_profile(3, 3, 13, 2)) == {2, 3}
    assert signed_bound_minimizer_exponents(digit_profile(5, 2, 8, 2)) == {1}


def test_bounds_coincide_examples():
    assert bounds_coincide(digit_profile(3, 2, 5, 2)) is True
    assert bounds_coincide(digit_profile(3, 2, 4, 2)) is False
    assert bounds_coincide(digit_profile(3, 3, 13, 2)) is False


def test_minimizer_props_reduced_grid():
    # direct minimization vs the digit characterizations on a small grid;
    # the acceptance suite runs the full declared ranges
    for p in (3, 5, 7):
        for r in (1, 2, 3):
            n = p**r
            g = parse_group(f"Z{p}^{r}") if r > 1 else parse_group(f"Z{p}")
            for h in (2, 3, 4):
                for m in range(1, min(n, 200) + 1):
                    prof = digit_profile(p, r, m, h)
                    terms = {i: divisor_term(p**i, m, h) for i in range(r + 1)}
                    u = min(terms.values())
                    assert u == min_sumset_size(n, m, h)
                    direct = {i for i, v in terms.items() if v == u}
                    assert direct == sumset_minimizer_exponents(prof), (p, r, m, h)
                    if m >= 2:
                        feas = feasible_divisors(g, m)
                        assert feas == [p**i for i in range(prof.top, r + 1)]
                        bound = min(terms[i] for i in range(prof.top, r + 1))
                        assert bound == signed_size_bound(g, m, h)
                        direct_b = {
                            i
                            for i in range(prof.top, r + 1)
                            if terms[i] == bound
                        }
                        assert direct_b == signed_bound_minimizer_exponents(prof)
                        assert bounds_coincide(prof) == (u == bound)


def test_scale_profile_examples():
    prof = scale_profile(5, 2, 8)
    assert (prof.delta, prof.k, prof.c) == (0, 1, 1)
    prof = scale_profile(5, 2, 6)
    assert (prof.delta, prof.k, prof.c) == (0, 1, 0)
    # maximality of k forces (k, c) = (1, 0) here: p^1 + 0 <= 3
    prof = scale_profile(3, 2, 2)
    assert (prof.delta, prof.k, prof.c) == (0, 1, 0)
    assert scale_profile(7, 3, 4).delta == 0  # 3 divides p - 1 = 6
    assert scale_profile(5, 3, 4).delta == 1  # 3 does not divide p - 1 = 4
    with pytest.raises(ParameterError):
        scale_profile(5, 5, 4)
    with pytest.raises(ParameterError):
        scale_profile(5, 1, 4)


def test_equality_certificate_examples():
    assert (
        equality_certificate(parse_group("Z3^2"), 7, 3)
        is EqualityCertificate.SMALL_PRIME
    )
    assert (
        equality_certificate(parse_group("Z5^2"), 8, 2)
        is EqualityCertificate.SCALE_BOUND
    )
    assert (
        equality_certificate(parse_group("Z5^2"), 6, 2) is EqualityCertificate.UNKNOWN
    )
    with pytest.raises(ParameterError):
        equality_certificate(parse_group("Z6"), 3, 2)
    with pytest.raises(ParameterError):
        equality_certificate(parse_group("Z9"), 3, 2)


def test_certificate_implies_coincidence_rank2():
    # at rank 2 the scale-bound certificate always lands where the divisor
    # minima coincide (the digit-carry crack needs m > p^2, i.e. rank >= 3)
    for p in (3, 5, 7):
        g = parse_group(f"Z{p}^2")
        for h in range(2, p):
            for m in range(2, g.order + 1):
                if equality_certificate(g, m, h) is EqualityCertificate.SCALE_BOUND:
                    assert bounds_coincide(digit_profile(p, 2, m, h)), (p, m, h)


def test_certificate_coincidence_gap_at_rank3():
    # known boundary case: the certificate's digit inference can miss a carry
    # when p/h is not an integer and m exceeds p^2; the divisor minima then
    # genuinely differ (direct arithmetic: 95 vs 100), so the certificate is
    # not a coincidence proof at rank >= 3
    from signedsum import GroupSpec

    g = GroupSpec((5, 5, 5), max_order=200)
    assert equality_certificate(g, 35, 3) is EqualityCertificate.SCALE_BOUND
    assert min_sumset_size(125, 35, 3) == 95
    assert signed_size_bound(g, 35, 3) == 100
    assert not bounds_coincide(digit_profile(5, 3, 35, 3))


def test_rank2_equality_examples():
    assert [m for m in range(1, 10) if not rank2_equality(3, m)] == [4]
    assert [m for m in range(1, 26) if not rank2_equality(5, m)] == [6, 7, 11, 12]
    assert rank2_equality(3, 9) is True
    with pytest.raises(ParameterError):
        rank2_equality(3, 10)
    with pytest.raises(ParameterError):
        rank2_equality(2, 2)


def test_rank2_equality_disagreement_count():
    for p in (3, 5, 7, 11, 13, 31, 101):
        false_count = sum(1 for m in range(1, p * p + 1) if not rank2_equality(p, m))
        assert false_count == (p - 1) ** 2 // 4


def test_conjectured_signed_size_examples():
    assert conjectured_signed_size(parse_group("Z3^2"), 4, 2) == 8
    assert conjectured_signed_size(parse_group("Z3^2"), 5, 2) == 9
    assert conjectured_signed_size(parse_group("Z9"), 4, 2) == 7


def test_conjectured_rank2_size_examples():
    assert conjectured_rank2_size(3, 4) == 8  # p^2 - 1 row
    assert conjectured_rank2_size(5, 6) == 15  # (2c+1)p row
    assert conjectured_rank2_size(5, 13) == 25  # p^2 row
    with pytest.raises(ParameterError):
        conjectured_rank2_size(5, 26)


def test_conjectured_rank2_vs_formula():
    # the table never predicts below the guaranteed minimum, and matches it
    # exactly where the rank-2 classification says the minima coincide
    for p in (3, 5, 7, 11):
        for m in range(1, p * p + 1):
            predicted = conjectured_rank2_size(p, m)
            u = min_sumset_size(p * p, m, 2)
            assert predicted >= u
            assert (predicted == u) == rank2_equality(p, m)


def test_conjectured_tables_agree_on_rank2():
    for p in (3, 5, 7):
        g = parse_group(f"Z{p}^2")
        for m in range(2, p * p + 1):
            assert conjectured_signed_size(g, m, 2) == conjectured_rank2_size(p, m)
