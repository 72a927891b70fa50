"""Exact censuses over (G_p)^n and seeded Monte Carlo density estimates.

Exact mode walks every n-tuple of words of G_p in odometer order (last
coordinate fastest) and counts each category with Python integers.  Monte
Carlo mode draws endomorphisms image by image from :class:`BallSampler`.

Both modes split their work into contiguous shards.  Exact counts do not
depend on the shard count.  Monte Carlo shard ``s`` uses its own stream
seeded by ``SeedSequence([seed, s])``, so results are reproducible for a
fixed ``(seed, shards)`` pair but change when the shard count changes.
"""

from __future__ import annotations

import itertools
import math
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from statistics import NormalDist
from typing import Callable, Iterable, Sequence

import numpy as np

from .freegroup import BallSampler, Word, enumerate_ball
from .formulas import count_ball, wecken_lower_bound
from .wagner import equality_lengths, has_remnant

DEFAULT_BUDGET = 10**8
RNG_ID = "numpy.PCG64"
CHUNK = 2048
Z95 = NormalDist().inv_cdf(0.975)

INV_E = 1 / math.e
TWO_OVER_E = 2 / math.e
ONE_MINUS_INV_E = 1 - 1 / math.e


class BudgetExceeded(Exception):
    def __init__(self, required: int, budget: int):
        self.required = required
        self.budget = budget
        super().__init__(f"census needs {required} classifications, budget is {budget}")


def default_budget() -> int:
    env = os.environ.get("WECKEN_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def default_shards() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


def ball_size(n: int, p: int) -> int:
    return 2 * p + 1 if n == 1 else count_ball(n, p)


@dataclass
class CensusResult:
    """Category counts over a set of endomorphisms.

    ``total`` is ``|G_p|^n`` in exact mode and the sample count in Monte
    Carlo mode.  ``ak`` maps each equality length k to the number of
    remnant maps with a tail equality of that length; ``ak[0]`` is the
    A_0 count.
    """

    n: int
    p: int
    total: int = 0
    remnant: int = 0
    vprime: int = 0
    v: int = 0
    a0: int = 0
    b: int = 0
    ak: Counter = field(default_factory=Counter)
    exact: bool = True

    def add(self, rem: bool, ks: set[int]) -> None:
        self.total += 1
        if not ks:
            self.vprime += 1
        if not rem:
            return
        self.remnant += 1
        if not ks:
            self.v += 1
            return
        for k in ks:
            self.ak[k] += 1
        if 0 in ks:
            self.a0 += 1
            if len(ks) == 1:
                self.b += 1

    def merge(self, other: "CensusResult") -> "CensusResult":
        self.total += other.total
        self.remnant += other.remnant
        self.vprime += other.vprime
        self.v += other.v
        self.a0 += other.a0
        self.b += other.b
        self.ak.update(other.ak)
        return self

    @property
    def wecken_certified(self) -> int:
        return self.v + self.b

    @property
    def undetermined(self) -> int:
        return self.remnant - self.wecken_certified

    @property
    def xp(self) -> Fraction:
        return Fraction(self.vprime, self.total)

    def fraction(self, category: str) -> Fraction:
        return Fraction(self.count(category), self.total)

    def count(self, category: str) -> int:
        if category.startswith("a") and category[1:].isdigit():
            return self.ak.get(int(category[1:]), 0)
        return getattr(self, category)

    def categories(self) -> list[str]:
        base = ["remnant", "vprime", "v", "a0", "b", "wecken_certified", "undetermined"]
        return base + [f"a{k}" for k in sorted(self.ak) if k >= 1]

    def ak_json(self) -> dict[str, int]:
        return {str(k): self.ak[k] for k in sorted(self.ak)}


def _tally(images_iter: Iterable[Sequence[Word]], result: CensusResult) -> CensusResult:
    for images in images_iter:
        result.add(has_remnant(images), equality_lengths(images))
    return result


def _exact_block(n: int, p: int, start: int, stop: int) -> CensusResult:
    words = list(enumerate_ball(n, p))
    tuples = itertools.islice(itertools.product(words, repeat=n), start, stop)
    return _tally(tuples, CensusResult(n, p))


def _blocks(total: int, shards: int) -> list[tuple[int, int]]:
    shards = max(1, min(shards, total)) if total else 1
    return [(s * total // shards, (s + 1) * total // shards) for s in range(shards)]


def _run_blocks(fn: Callable, args: list[tuple], shards: int) -> list:
    if shards <= 1 or len(args) <= 1:
        return [fn(*a) for a in args]
    with ProcessPoolExecutor(max_workers=min(shards, len(args))) as pool:
        return list(pool.map(fn, *zip(*args)))


def exact_census(n: int, p: int, budget: int | None = None, shards: int = 1) -> CensusResult:
    """Classify every endomorphism in (G_p)^n.

    Raises :class:`BudgetExceeded` before doing any work when
    ``|G_p|^n`` is above ``budget``.
    """
    budget = default_budget() if budget is None else budget
    total = ball_size(n, p) ** n
    if total > budget:
        raise BudgetExceeded(total, budget)
    parts = _run_blocks(_exact_block, [(n, p, a, b) for a, b in _blocks(total, shards)], shards)
    result = CensusResult(n, p)
    for part in parts:
        result.merge(part)
    assert result.total == total
    return result


@dataclass
class XpSequence:
    n: int
    values: list[Fraction]
    stopped_at: int | None = None
    required: int | None = None

    @property
    def complete(self) -> bool:
        return self.stopped_at is None

    @property
    def notice(self) -> str | None:
        if self.complete:
            return None
        return f"stopped at p={self.stopped_at}: needs {self.required} classifications"


def xp_sequence(n: int, p_max: int, budget: int | None = None, shards: int = 1) -> XpSequence:
    """Exact x_1 .. x_{p_max}; stops with a notice at the first p over budget."""
    seq = XpSequence(n, [])
    for p in range(1, p_max + 1):
        try:
            seq.values.append(exact_census(n, p, budget, shards).xp)
        except BudgetExceeded as exc:
            seq.stopped_at, seq.required = p, exc.required
            break
    return seq


def wilson_interval(successes: int, trials: int, z: float = Z95) -> tuple[float, float]:
    if trials <= 0:
        raise ValueError("need at least one trial")
    phat = successes / trials
    z2 = z * z
    denom = 1 + z2 / trials
    center = (phat + z2 / (2 * trials)) / denom
    half = z / denom * math.sqrt(phat * (1 - phat) / trials + z2 / (4 * trials * trials))
    return max(0.0, min(phat, center - half)), min(1.0, max(phat, center + half))


@dataclass(frozen=True)
class DensityEstimate:
    category: str
    fraction: float
    ci_low: float
    ci_high: float
    samples: int
    seed: int
    rng_id: str = RNG_ID

    @property
    def sigma(self) -> float:
        return math.sqrt(self.fraction * (1 - self.fraction) / self.samples)


@dataclass
class MonteCarloResult:
    census: CensusResult
    estimates: list[DensityEstimate]
    seed: int
    shards: int

    def estimate(self, category: str) -> DensityEstimate:
        for e in self.estimates:
            if e.category == category:
                return e
        raise KeyError(category)


def _mc_block(n: int, p: int, count: int, seed: int, shard: int) -> CensusResult:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, shard])))
    sampler = BallSampler(n, p)
    result = CensusResult(n, p, exact=False)
    done = 0
    while done < count:
        size = min(CHUNK, count - done)
        words = sampler.sample_many(rng, size * n)
        _tally((words[r * n : (r + 1) * n] for r in range(size)), result)
        done += size
    return result


def sample_endomorphisms(n: int, p: int, count: int, seed: int, shard: int = 0) -> list[tuple[Word, ...]]:
    """The image tuples that shard ``shard`` of a Monte Carlo run classifies."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, shard])))
    sampler = BallSampler(n, p)
    out = []
    while len(out) < count:
        size = min(CHUNK, count - len(out))
        words = sampler.sample_many(rng, size * n)
        out.extend(tuple(words[r * n : (r + 1) * n]) for r in range(size))
    return out


def mc_census(n: int, p: int, samples: int, seed: int = 0, shards: int = 1) -> MonteCarloResult:
    """Estimate category densities from ``samples`` uniform draws of (G_p)^n."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    shards = max(1, min(shards, samples))
    args = [(n, p, b - a, seed, s) for s, (a, b) in enumerate(_blocks(samples, shards))]
    result = CensusResult(n, p, exact=False)
    for part in _run_blocks(_mc_block, args, shards):
        result.merge(part)
    estimates = []
    for cat in result.categories():
        c = result.count(cat)
        lo, hi = wilson_interval(c, samples)
        estimates.append(DensityEstimate(cat, c / samples, lo, hi, samples, seed))
    return MonteCarloResult(result, estimates, seed, shards)


TREND_CATEGORIES = ("vprime", "v", "a0", "b", "remnant", "wecken_certified")


@dataclass(frozen=True)
class TrendRow:
    n: int
    p: int
    estimate: DensityEstimate
    shards: int
    wecken_lower_bound: Fraction

    @property
    def dev_inv_e(self) -> float:
        return self.estimate.fraction - INV_E

    @property
    def dev_two_over_e(self) -> float:
        return self.estimate.fraction - TWO_OVER_E

    @property
    def dev_one_minus_inv_e(self) -> float:
        return self.estimate.fraction - ONE_MINUS_INV_E

    @property
    def dev_wecken_bound(self) -> float:
        return self.estimate.fraction - float(self.wecken_lower_bound)


def default_p_rule(n: int) -> int:
    return max(50, 4 * n)


def density_trend(
    n_list: Iterable[int],
    p_rule: Callable[[int], int] | int | None = None,
    samples: int = 10**5,
    seed: int = 0,
    shards: int = 1,
) -> list[TrendRow]:
    """Estimates per rank, with deviations from the reference constants.

    Deviations are reported, never asserted: the limit constants are
    claims about n -> infinity and p -> infinity.
    """
    if p_rule is None:
        p_rule = default_p_rule
    elif isinstance(p_rule, int):
        fixed = p_rule
        p_rule = lambda n: fixed  # noqa: E731
    rows = []
    for n in n_list:
        p = p_rule(n)
        mc = mc_census(n, p, samples, seed, shards)
        bound = wecken_lower_bound(n)
        for cat in TREND_CATEGORIES:
            rows.append(TrendRow(n, p, mc.estimate(cat), mc.shards, bound))
    return rows
