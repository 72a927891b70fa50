"""Exact counting formulas and density bounds.

Everything here is integer or :class:`fractions.Fraction` arithmetic.
Floats only appear where results are rendered for output.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from math import comb


def _need_rank(n: int, low: int = 2) -> None:
    if n < low:
        raise ValueError(f"rank must be >= {low}, got {n}")


def count_words_exact(n: int, k: int) -> int:
    """Number of reduced words of length exactly k; 1 for k = 0."""
    _need_rank(n, 1)
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    if k == 0:
        return 1
    return 2 * n * (2 * n - 1) ** (k - 1)


def count_ball(n: int, p: int) -> int:
    """|G_p| = (n(2n-1)^p - 1)/(n-1).

    Undefined for n = 1; use ``2p + 1`` or enumerate.
    """
    _need_rank(n)
    if p < 0:
        raise ValueError(f"p must be >= 0, got {p}")
    q, r = divmod(n * (2 * n - 1) ** p - 1, n - 1)
    assert r == 0
    return q


def _check_kp(k: int, p: int) -> None:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k > p:
        raise ValueError(f"need k <= p, got k={k}, p={p}")


def count_shell(n: int, k: int, p: int) -> int:
    """S(k, p): words with length between k and p."""
    _need_rank(n)
    _check_kp(k, p)
    return count_ball(n, p) - count_ball(n, k - 1)


def count_shell_closed(n: int, k: int, p: int) -> Fraction:
    """S(k, p) in product form n(2n-1)^{k-1}((2n-1)^{p-k+1} - 1)/(n-1)."""
    _need_rank(n)
    _check_kp(k, p)
    b = 2 * n - 1
    return Fraction(n * b ** (k - 1) * (b ** (p - k + 1) - 1), n - 1)


def prob_length_between(n: int, k: int, p: int) -> Fraction:
    """U(k, p) = S(k, p)/|G_p|."""
    return Fraction(count_shell(n, k, p), count_ball(n, p))


def prob_length_between_closed(n: int, k: int, p: int) -> Fraction:
    _need_rank(n)
    _check_kp(k, p)
    b = 2 * n - 1
    return Fraction(n * b ** (k - 1) * (b ** (p - k + 1) - 1), n * b**p - 1)


def lemma1_bound(n: int, k: int) -> Fraction:
    """Upper bound (3n-2)/(2n(2n-1)^k) on the density of A_{k,n}, k >= 1."""
    _need_rank(n)
    if k < 1:
        raise ValueError("the bound is stated for k >= 1")
    return Fraction(3 * n - 2, 2 * n * (2 * n - 1) ** k)


@dataclass(frozen=True)
class CaseProbs:
    """Probabilities of the three ways two fixed tails can coincide at length k."""

    inverse_own: Fraction
    inverse_other: Fraction
    positive_own: Fraction

    @property
    def total(self) -> Fraction:
        return self.inverse_own + self.inverse_other + self.positive_own


def lemma1_case_probs(n: int, k: int) -> CaseProbs:
    _need_rank(n)
    if k < 1:
        raise ValueError("the case analysis is stated for k >= 1")
    w_k = count_words_exact(n, k)
    w_k1 = count_words_exact(n, k + 1)
    return CaseProbs(
        inverse_own=Fraction(1, 2 * n * w_k1),
        inverse_other=Fraction(1, 2 * n * (2 * n - 1) * w_k),
        positive_own=Fraction(n - 1, n * (2 * n - 1) * w_k1),
    )


def bound_from_cases(n: int, k: int) -> Fraction:
    """C(2n, 2) times the summed case probabilities; equals :func:`lemma1_bound`."""
    return comb(2 * n, 2) * lemma1_case_probs(n, k).total


def tail_bound_sum(n: int) -> Fraction:
    """Sum over k >= 1 of :func:`lemma1_bound`, i.e. (3n-2)/(2n(2n-2))."""
    _need_rank(n)
    return Fraction(3 * n - 2, 2 * n * (2 * n - 2))


def tail_bound_remainder(n: int, K: int) -> Fraction:
    """Sum over k > K of :func:`lemma1_bound`."""
    _need_rank(n)
    return Fraction(3 * n - 2, 2 * n * (2 * n - 2) * (2 * n - 1) ** K)


def wecken_lower_bound(n: int) -> Fraction:
    """Lower bound 1 - (3n-2)/(2n(2n-2)) on the density of Wecken maps."""
    return 1 - tail_bound_sum(n)


def first_rank_exceeding(level: Fraction | float | str, n_max: int = 10**6) -> int:
    """Smallest n >= 2 whose Wecken lower bound is strictly above ``level``."""
    level = Fraction(level)
    for n in range(2, n_max + 1):
        if wecken_lower_bound(n) > level:
            return n
    raise ValueError(f"bound stays <= {level} up to n = {n_max}")


def appendix_case_prob(n: int, k: int, p: int) -> Fraction:
    """a_p = U(k,p)/(2n) * U(k+1,p)/W(k+1), for 1 <= k and k+1 <= p."""
    _need_rank(n)
    _check_kp(k, p)
    if k + 1 > p:
        raise ValueError(f"need k + 1 <= p, got k={k}, p={p}")
    return (
        prob_length_between(n, k, p)
        / (2 * n)
        * prob_length_between(n, k + 1, p)
        / count_words_exact(n, k + 1)
    )


def u_ratio(n: int, k: int, p: int) -> Fraction:
    """U(k, p)/U(k, p+1), which never exceeds 1."""
    return prob_length_between(n, k, p) / prob_length_between(n, k, p + 1)


@dataclass(frozen=True)
class BoundReport:
    n: int
    per_k: tuple[Fraction, ...]
    tail_sum: Fraction
    wecken_lower_bound: Fraction


def bound_report(n: int, k_max: int = 10) -> BoundReport:
    return BoundReport(
        n,
        tuple(lemma1_bound(n, k) for k in range(1, k_max + 1)),
        tail_bound_sum(n),
        wecken_lower_bound(n),
    )


def render_decimal(x: Fraction, precision: int = 12) -> str:
    """``x`` with ``precision`` significant digits."""
    with localcontext() as ctx:
        ctx.prec = precision
        return str(Decimal(x.numerator) / Decimal(x.denominator))
