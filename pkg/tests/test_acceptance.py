"""Exit criteria.  Each test records a one-line detail shown in the summary."""

import io
import math
import time
from fractions import Fraction

import pytest

from wecken import formulas as F
from wecken.census import density_trend, exact_census, mc_census, sample_endomorphisms, xp_sequence
from wecken.cli import main
from wecken.freegroup import enumerate_ball, invert, multiply
from wecken.wagner import Endomorphism, wagner_tails

from .test_census import GOLDEN_N2, as_dict

SEED = 20261017


def timed(fn):
    t0 = time.perf_counter()
    value = fn()
    return value, time.perf_counter() - t0


@pytest.mark.criterion(1)
def test_closed_form_matches_enumeration(record_property):
    def check():
        bad = []
        for n in (2, 3, 4):
            for p in range(6):
                if sum(1 for _ in enumerate_ball(n, p)) != F.count_ball(n, p):
                    bad.append((n, p))
        return bad

    bad, secs = timed(check)
    record_property("detail", f"mismatches={bad} (2,5)={F.count_ball(2, 5)} (3,3)={F.count_ball(3, 3)} in {secs:.2f}s")
    assert not bad
    assert F.count_ball(2, 5) == 485 and F.count_ball(3, 3) == 187
    assert secs < 10


@pytest.mark.criterion(2)
def test_tail_reconstruction(record_property):
    def check():
        checked, failures = 0, 0
        for n in (2, 3, 4, 5):
            for images in sample_endomorphisms(n, 30, 2500, SEED + n):
                for t in wagner_tails(Endomorphism(n, images))[1:]:
                    checked += 1
                    if multiply(multiply(t.w, (t.location,)), invert(t.w_bar)) != images[t.location - 1]:
                        failures += 1
        return checked, failures

    (checked, failures), secs = timed(check)
    record_property("detail", f"10^4 maps, {checked} tail pairs, {failures} failures in {secs:.1f}s")
    assert failures == 0 and checked > 0
    assert secs < 30


@pytest.mark.criterion(3)
def test_xp_monotone(record_property):
    seq, secs = timed(lambda: xp_sequence(2, 5))
    vals = seq.values
    record_property("detail", f"x_1..x_5 = {[str(v) for v in vals]} in {secs:.1f}s")
    assert seq.complete and len(vals) == 5
    assert vals[0] == Fraction(16, 25)
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    assert secs < 60


@pytest.mark.criterion(4)
def test_ak_bound_consistency(record_property):
    def check():
        for n in range(2, 11):
            for k in range(1, 11):
                assert F.bound_from_cases(n, k) == F.lemma1_bound(n, k)
            for K in range(1, 11):
                head = sum((F.lemma1_bound(n, k) for k in range(1, K + 1)), Fraction(0))
                assert head + F.tail_bound_remainder(n, K) == Fraction(3 * n - 2, 2 * n * (2 * n - 2))
            assert F.tail_bound_sum(n) == Fraction(3 * n - 2, 2 * n * (2 * n - 2))

    _, secs = timed(check)
    record_property("detail", f"n=2..10, k=1..10 exact in {secs:.3f}s")
    assert secs < 1


@pytest.mark.criterion(5)
def test_ak_bound_empirical(record_property):
    def check():
        return {p: exact_census(2, p) for p in (4, 5)}

    results, secs = timed(check)
    fracs = {p: Fraction(r.ak[1], r.total) for p, r in results.items()}
    record_property("detail", ", ".join(f"p={p}: A_1 = {f} ~ {float(f):.4f}" for p, f in fracs.items()) + f" (bound 1/3) in {secs:.1f}s")
    for p, r in results.items():
        assert as_dict(r) == GOLDEN_N2[p]
        assert fracs[p] <= F.lemma1_bound(2, 1)
    assert secs < 120


@pytest.mark.criterion(6)
def test_wecken_bound_thresholds(record_property):
    def check():
        return [F.wecken_lower_bound(n) for n in (7, 8, 75, 76)]

    (b7, b8, b75, b76), secs = timed(check)
    record_property("detail", f"b(7)={b7} b(8)={b8} b(75)={float(b75):.6f} b(76)={float(b76):.6f}")
    assert b7 <= Fraction(9, 10) < b8
    assert b75 <= Fraction(99, 100) < b76
    assert F.first_rank_exceeding(Fraction(9, 10)) == 8
    assert F.first_rank_exceeding(Fraction(99, 100)) == 76
    assert secs < 1


@pytest.mark.criterion(7)
def test_mc_agrees_with_exact(record_property):
    def check():
        return exact_census(2, 4), mc_census(2, 4, 10**5, seed=SEED, shards=1)

    (exact, mc), secs = timed(check)
    parts = []
    ok = True
    for cat in ("vprime", "a0", "remnant"):
        p = float(exact.fraction(cat))
        sigma = math.sqrt(p * (1 - p) / 10**5)
        z = (mc.estimate(cat).fraction - p) / sigma
        ok &= abs(z) <= 3
        parts.append(f"{cat}: z={z:+.2f}")
    record_property("detail", ", ".join(parts) + f" in {secs:.1f}s")
    assert ok
    assert secs < 60


@pytest.mark.criterion(8)
def test_certified_wecken_floor(record_property):
    rows, secs = timed(lambda: density_trend([5, 10], p_rule=50, samples=10**5, seed=SEED))
    parts = []
    ok = True
    for r in rows:
        if r.estimate.category != "wecken_certified":
            continue
        bound = float(F.wecken_lower_bound(r.n))
        margin = r.estimate.fraction - (bound - 3 * r.estimate.sigma)
        ok &= margin >= 0
        parts.append(f"n={r.n}: {r.estimate.fraction:.4f} vs bound {bound:.4f}")
    record_property("detail", ", ".join(parts) + f" in {secs:.0f}s")
    assert ok and len(parts) == 2
    assert secs < 300


@pytest.mark.criterion(9)
def test_inverse_e_trend(record_property):
    rows, secs = timed(lambda: density_trend([3, 20], p_rule=80, samples=10**5, seed=SEED))
    est = {(r.n, r.estimate.category): r for r in rows}
    d3 = abs(est[3, "vprime"].estimate.fraction - 1 / math.e)
    d20 = abs(est[20, "vprime"].estimate.fraction - 1 / math.e)
    # reported only: A_0 and B against both candidate limits
    a0, b = est[20, "a0"], est[20, "b"]
    record_property(
        "detail",
        f"|V'-1/e|: n=3 {d3:.4f}, n=20 {d20:.4f}; n=20 A0 {a0.estimate.fraction:.4f} "
        f"(2/e dev {a0.dev_two_over_e:+.4f}, 1-1/e dev {a0.dev_one_minus_inv_e:+.4f}), "
        f"B {b.estimate.fraction:.4f} (2/e dev {b.dev_two_over_e:+.4f}, 1-1/e dev {b.dev_one_minus_inv_e:+.4f}) "
        f"in {secs:.0f}s",
    )
    assert d20 < d3
    assert secs < 600


@pytest.mark.criterion(10)
def test_u_ratio_sweep(record_property):
    def check():
        return [(n, k, p) for n in range(2, 7) for p in range(1, 21) for k in range(1, p + 1) if F.u_ratio(n, k, p) > 1]

    bad, secs = timed(check)
    record_property("detail", f"violations={bad} in {secs:.3f}s")
    assert not bad
    assert secs < 1


def _cli(*argv):
    out = io.StringIO()
    code = main([*argv, "--no-header"], out=out)
    assert code == 0
    return out.getvalue()


@pytest.mark.criterion(11)
def test_determinism(record_property):
    exact_cmds = [
        ("census", "--rank", "2", "--max-p", "3"),
        ("xp", "--rank", "2", "--max-p", "3"),
    ]
    checks = 0
    for cmd in exact_cmds:
        single = _cli(*cmd, "--shards", "1")
        assert single == _cli(*cmd, "--shards", "1")
        assert single == _cli(*cmd, "--shards", "3")
        checks += 2
    bounds = _cli("bounds", "--n-range", "2..100")
    assert bounds == _cli("bounds", "--n-range", "2..100")
    checks += 1
    for shards in ("1", "2"):
        mc = ("mc", "--rank", "2", "--max-p", "5", "--samples", "4000", "--seed", str(SEED), "--shards", shards)
        assert _cli(*mc) == _cli(*mc)
        trend = ("trend", "--ranks", "2", "4", "--max-p", "8", "--samples", "1000", "--seed", "1", "--shards", shards)
        assert _cli(*trend) == _cli(*trend)
        checks += 2
    record_property("detail", f"{checks} byte-identical comparisons")
