"""Reduced words in the free group of rank n.

A word is a plain tuple of nonzero ints: ``i`` stands for the generator
``a_i`` and ``-i`` for its inverse, so ``(1, -2, 1)`` is ``a_1 a_2^-1 a_1``.
Tuples are immutable and hashable, which is all the value semantics the
rest of the package needs.

The ball ``G_p`` of radius ``p`` contains every reduced word of length at
most ``p``, the empty word included.  That is the convention under which
``|G_p| = (n(2n-1)^p - 1)/(n-1)`` holds exactly.
"""

from __future__ import annotations

import re
import string
from operator import neg
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

Word = tuple[int, ...]

EMPTY: Word = ()


class WordError(ValueError):
    """Raised for letters or text that do not describe a word of the rank."""


def check_rank(rank: int) -> int:
    if isinstance(rank, bool) or not isinstance(rank, (int, np.integer)) or rank < 1:
        raise WordError(f"rank must be an integer >= 1, got {rank!r}")
    return int(rank)


def _check_letter(x: int, rank: int | None) -> int:
    x = int(x)
    if x == 0:
        raise WordError("0 is not a generator index")
    if rank is not None and abs(x) > rank:
        raise WordError(f"generator index {abs(x)} out of range for rank {rank}")
    return x


def reduce(seq: Iterable[int], rank: int | None = None) -> Word:
    """Freely reduce a sequence of signed letters.

    >>> reduce([1, 2, -2, -1, 1])
    (1,)
    """
    out: list[int] = []
    for x in seq:
        x = _check_letter(x, rank)
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def is_reduced(w: Sequence[int]) -> bool:
    return all(w[t] != -w[t + 1] for t in range(len(w) - 1))


def invert(w: Word) -> Word:
    return tuple(map(neg, w[::-1]))


def cancel_len(u: Sequence[int], v: Sequence[int]) -> int:
    """Length of the longest suffix of ``u`` that is the inverse of a prefix of ``v``."""
    t = 0
    m = min(len(u), len(v))
    while t < m and u[-1 - t] == -v[t]:
        t += 1
    return t


def multiply(u: Word, v: Word, rank: int | None = None) -> Word:
    """Reduced product ``u v``.

    With ``rank`` given, both factors are checked against it first.
    """
    if rank is not None:
        for x in u:
            _check_letter(x, rank)
        for x in v:
            _check_letter(x, rank)
    t = cancel_len(u, v)
    return tuple(u[: len(u) - t]) + tuple(v[t:])


def letter_key(x: int) -> int:
    """Position of a letter in the order a_1 < a_1^-1 < a_2 < a_2^-1 < ..."""
    return 2 * (abs(x) - 1) + (x < 0)


def letter_from_key(c: int) -> int:
    return -(c // 2 + 1) if c & 1 else c // 2 + 1


def alphabet(rank: int) -> list[int]:
    """All 2n letters in canonical order."""
    return [letter_from_key(c) for c in range(2 * check_rank(rank))]


def word_key(w: Word) -> tuple:
    """Sort key of the canonical order: by length, then letter by letter."""
    return (len(w), tuple(letter_key(x) for x in w))


def enumerate_ball(rank: int, max_len: int) -> Iterator[Word]:
    """Yield every reduced word of length 0..max_len once, in canonical order."""
    letters = alphabet(rank)
    if max_len < 0:
        return
    level: list[Word] = [EMPTY]
    yield EMPTY
    for _ in range(max_len):
        nxt: list[Word] = []
        for w in level:
            last = w[-1] if w else 0
            for x in letters:
                if x != -last:
                    nxt.append(w + (x,))
        yield from nxt
        level = nxt


def words_of_length(rank: int, k: int) -> int:
    """Number of reduced words of length exactly ``k`` (1 for ``k == 0``)."""
    if k == 0:
        return 1
    return 2 * rank * (2 * rank - 1) ** (k - 1)


class BallSampler:
    """Uniform sampler over the ball ``G_p``.

    A length ``k`` is drawn with probability ``W(k)/|G_p|`` and then a
    uniform reduced word of that length: the first letter is uniform over
    2n choices, each later one over the 2n-1 letters that do not cancel.

    Letters are produced column by column for a whole batch at once, so
    :meth:`sample_codes` is the fast path used by the Monte Carlo census.
    """

    def __init__(self, rank: int, max_len: int):
        self.rank = check_rank(rank)
        if max_len < 0:
            raise WordError(f"max_len must be >= 0, got {max_len}")
        self.max_len = int(max_len)
        counts = [words_of_length(self.rank, k) for k in range(self.max_len + 1)]
        total = sum(counts)
        acc = 0
        cdf = []
        for c in counts:
            acc += c
            cdf.append(float(Fraction(acc, total)))
        cdf[-1] = 1.0
        self._cdf = np.array(cdf)
        self._signed = np.array(alphabet(self.rank), dtype=np.int64)

    def sample_codes(self, rng: np.random.Generator, size: int):
        """Draw ``size`` words as ``(codes, lengths)``.

        ``codes[r, :lengths[r]]`` holds the letter keys of word ``r``; the
        rest of the row is filler and must be ignored.
        """
        n2 = 2 * self.rank
        lengths = np.searchsorted(self._cdf, rng.random(size), side="right")
        lengths = np.minimum(lengths, self.max_len)
        codes = np.empty((size, self.max_len), dtype=np.int64)
        if self.max_len == 0:
            return codes, lengths
        codes[:, 0] = rng.integers(0, n2, size)
        for col in range(1, self.max_len):
            r = rng.integers(0, n2 - 1, size)
            inv = codes[:, col - 1] ^ 1
            codes[:, col] = r + (r >= inv)
        return codes, lengths

    def to_words(self, codes: np.ndarray, lengths: np.ndarray) -> list[Word]:
        rows = self._signed[codes].tolist()
        return [tuple(row[:k]) for row, k in zip(rows, lengths.tolist())]

    def sample(self, rng: np.random.Generator) -> Word:
        codes, lengths = self.sample_codes(rng, 1)
        return self.to_words(codes, lengths)[0]

    def sample_many(self, rng: np.random.Generator, size: int) -> list[Word]:
        return self.to_words(*self.sample_codes(rng, size))


def sample_word(rank: int, max_len: int, rng: np.random.Generator) -> Word:
    """One uniform draw from ``G_p``.  See :class:`BallSampler`."""
    return BallSampler(rank, max_len).sample(rng)


_INT_TOKEN = re.compile(r"[+-]?\d+\Z")


def parse_word(text: str, rank: int | None = None, *, alpha: bool = False) -> tuple[Word, bool]:
    """Parse a word and reduce it.

    Returns ``(word, was_reduced)`` where the flag is set when the input
    was not already reduced.  The integer format is whitespace separated
    signed indices with ``e`` for the empty word; the alpha format writes
    ``a_i`` as the i-th lowercase letter and its inverse in uppercase, with
    ``1`` for the empty word (``e`` is the fifth generator there).
    """
    text = text.strip()
    if alpha:
        raw = []
        for ch in text.replace(" ", ""):
            if ch in string.ascii_lowercase:
                raw.append(string.ascii_lowercase.index(ch) + 1)
            elif ch in string.ascii_uppercase:
                raw.append(-(string.ascii_uppercase.index(ch) + 1))
            elif text == "1":
                continue
            else:
                raise WordError(f"bad character {ch!r} in {text!r}")
    elif text in ("", "e"):
        raw = []
    else:
        raw = []
        for tok in text.replace(",", " ").split():
            if not _INT_TOKEN.match(tok):
                raise WordError(f"malformed token {tok!r} in {text!r}")
            raw.append(_check_letter(int(tok), rank))
    if rank is not None:
        for x in raw:
            _check_letter(x, rank)
    w = reduce(raw, rank)
    return w, len(w) != len(raw)


def format_word(w: Word, style: str = "int") -> str:
    if style == "int":
        return " ".join(str(x) for x in w) if w else "e"
    if style == "alpha":
        if not w:
            return "1"
        if max(abs(x) for x in w) > 26:
            raise WordError("alpha format needs generator indices <= 26")
        return "".join(
            string.ascii_lowercase[x - 1] if x > 0 else string.ascii_uppercase[-x - 1] for x in w
        )
    raise ValueError(f"unknown word style {style!r}")
