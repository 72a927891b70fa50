from fractions import Fraction
from math import comb

import pytest

from wecken import formulas as F
from wecken.freegroup import enumerate_ball


def test_words_exact():
    assert F.count_words_exact(2, 1) == 4
    assert F.count_words_exact(2, 2) == 12
    assert F.count_words_exact(5, 0) == 1


@pytest.mark.parametrize("n, k", [(2, 2), (2, 4), (3, 3)])
def test_words_exact_against_enumeration(n, k):
    assert F.count_words_exact(n, k) == sum(1 for w in enumerate_ball(n, k) if len(w) == k)


@pytest.mark.parametrize("n, p, size", [(2, 2, 17), (2, 5, 485), (3, 3, 187), (2, 0, 1)])
def test_count_ball(n, p, size):
    assert F.count_ball(n, p) == size


def test_count_ball_rejects_rank_one():
    with pytest.raises(ValueError):
        F.count_ball(1, 3)


def test_ball_is_sum_of_shells():
    for n in range(2, 11):
        for p in range(31):
            assert sum(F.count_words_exact(n, k) for k in range(p + 1)) == F.count_ball(n, p)


def test_shell_examples():
    assert F.count_shell(2, 1, 1) == 4
    assert F.prob_length_between(2, 1, 1) == Fraction(4, 5)
    assert F.count_shell(2, 1, 2) == 16
    assert F.prob_length_between(2, 1, 2) == Fraction(16, 17)
    for n in (2, 3, 7):
        for p in range(1, 12):
            assert F.prob_length_between(n, p, p) == Fraction(F.count_words_exact(n, p), F.count_ball(n, p))


def test_shell_closed_forms():
    for n in range(2, 7):
        for p in range(1, 15):
            for k in range(1, p + 1):
                assert F.count_shell_closed(n, k, p) == F.count_shell(n, k, p)
                assert F.prob_length_between_closed(n, k, p) == F.prob_length_between(n, k, p)


@pytest.mark.parametrize("k, p", [(0, 3), (4, 3)])
def test_shell_range_errors(k, p):
    with pytest.raises(ValueError):
        F.count_shell(2, k, p)


def test_ak_bound_examples():
    assert F.lemma1_bound(2, 1) == Fraction(1, 3)
    cases = F.lemma1_case_probs(2, 1)
    assert (cases.inverse_own, cases.inverse_other, cases.positive_own) == (
        Fraction(1, 48),
        Fraction(1, 48),
        Fraction(1, 72),
    )
    assert 6 * cases.total == Fraction(1, 3)
    with pytest.raises(ValueError):
        F.lemma1_bound(2, 0)


def test_inverse_cases_equal():
    for n in range(2, 12):
        for k in range(1, 12):
            c = F.lemma1_case_probs(n, k)
            assert c.inverse_own == c.inverse_other


def test_finite_tail_identity():
    for n in range(2, 11):
        for K in range(0, 15):
            head = sum((F.lemma1_bound(n, k) for k in range(1, K + 1)), Fraction(0))
            assert head + F.tail_bound_remainder(n, K) == F.tail_bound_sum(n)
            assert head + Fraction(3 * n - 2, 2 * n * (2 * n - 2) * (2 * n - 1) ** K) == F.tail_bound_sum(n)


def test_wecken_bound_values():
    assert F.wecken_lower_bound(2) == Fraction(1, 2)
    assert F.wecken_lower_bound(8) == Fraction(101, 112)
    assert F.wecken_lower_bound(7) == Fraction(149, 168)
    assert F.wecken_lower_bound(10) == 1 - Fraction(28, 360)
    assert F.wecken_lower_bound(75) < Fraction(99, 100) < F.wecken_lower_bound(76)


def test_wecken_bound_increasing_to_one():
    values = [F.wecken_lower_bound(n) for n in range(2, 400)]
    assert all(a < b for a, b in zip(values, values[1:]))
    assert 1 - values[-1] < Fraction(1, 250)
    assert all(v < 1 for v in values)


def test_thresholds():
    assert F.first_rank_exceeding("0.9") == 8
    assert F.first_rank_exceeding("0.99") == 76


def test_u_ratio_example():
    assert F.u_ratio(2, 1, 1) == Fraction(17, 20)


def test_u_ratio_sweep():
    for n in range(2, 7):
        for p in range(1, 21):
            for k in range(1, p + 1):
                assert F.u_ratio(n, k, p) <= 1


def test_case_prob_increasing_in_p():
    for n in range(2, 7):
        for p in range(2, 21):
            for k in range(1, p):
                assert F.appendix_case_prob(n, k, p) <= F.appendix_case_prob(n, k, p + 1)


def test_case_prob_factorisation():
    # a_p = (U(k,p)/U(k,p+1)) (U(k+1,p)/U(k+1,p+1)) a_{p+1}
    for n in (2, 3):
        for p in range(2, 10):
            for k in range(1, p):
                lhs = F.appendix_case_prob(n, k, p)
                rhs = F.u_ratio(n, k, p) * F.u_ratio(n, k + 1, p) * F.appendix_case_prob(n, k, p + 1)
                assert lhs == rhs


def test_bound_report():
    r = F.bound_report(3, k_max=4)
    assert r.per_k[0] == F.lemma1_bound(3, 1)
    assert r.tail_sum == F.tail_bound_sum(3)
    assert r.wecken_lower_bound == 1 - r.tail_sum


def test_render_decimal():
    assert F.render_decimal(Fraction(101, 112), 6) == "0.901786"
    assert F.render_decimal(Fraction(1, 2)) == "0.5"


def test_bound_from_cases_uses_pair_count():
    assert F.bound_from_cases(3, 2) == comb(6, 2) * F.lemma1_case_probs(3, 2).total
