"""Wagner tails and the remnant condition for free-group endomorphisms."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .freegroup import EMPTY, Word, WordError, cancel_len, check_rank, format_word, invert, parse_word

W_SIDE = "w"
W_BAR_SIDE = "w_bar"


@dataclass(frozen=True)
class Endomorphism:
    """An endomorphism of the rank-n free group, given by the images of a_1..a_n."""

    rank: int
    images: tuple[Word, ...]

    def __post_init__(self):
        rank = check_rank(self.rank)
        images = tuple(tuple(int(x) for x in w) for w in self.images)
        if len(images) != rank:
            raise WordError(f"rank {rank} needs {rank} images, got {len(images)}")
        for w in images:
            for t, x in enumerate(w):
                if x == 0 or abs(x) > rank:
                    raise WordError(f"letter {x} out of range for rank {rank}")
                if t and w[t - 1] == -x:
                    raise WordError(f"image {format_word(w)!r} is not reduced")
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "images", images)

    @classmethod
    def from_text(cls, texts: Sequence[str], rank: int | None = None, *, alpha: bool = False):
        rank = len(texts) if rank is None else rank
        return cls(rank, tuple(parse_word(t, rank, alpha=alpha)[0] for t in texts))

    @classmethod
    def identity(cls, rank: int):
        return cls(rank, tuple((i,) for i in range(1, rank + 1)))

    def to_dict(self) -> dict:
        return {"rank": self.rank, "images": [format_word(w) for w in self.images]}

    @classmethod
    def from_dict(cls, data: dict):
        try:
            rank, texts = data["rank"], data["images"]
        except (KeyError, TypeError) as exc:
            raise WordError(f"endomorphism object needs 'rank' and 'images': {exc}") from None
        if not isinstance(texts, list) or not all(isinstance(t, str) for t in texts):
            raise WordError("'images' must be a list of word strings")
        return cls.from_text(texts, check_rank(rank))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise WordError(f"invalid endomorphism JSON: {exc}") from None
        return cls.from_dict(data)


@dataclass(frozen=True)
class TailPair:
    slot: int
    w: Word
    w_bar: Word
    location: int = 0
    position: int = 0
    sign: int = 1

    @property
    def is_trivial(self) -> bool:
        return self.slot == 0


@dataclass(frozen=True)
class TailEquality:
    """Two tail occurrences with the same value; each side is ``(slot, W_SIDE | W_BAR_SIDE)``."""

    first: tuple[int, str]
    second: tuple[int, str]
    length: int

    @property
    def same_slot(self) -> bool:
        return self.first[0] == self.second[0]


@dataclass(frozen=True)
class RemnantReport:
    left_damage: tuple[int, ...]
    right_damage: tuple[int, ...]
    remnant_length: tuple[int, ...]

    @property
    def has_remnant(self) -> bool:
        return all(r > 0 for r in self.remnant_length)


def raw_tails(images: Sequence[Word]) -> list[tuple[Word, Word, int, int, int]]:
    """Non-trivial tails as ``(w, w_bar, location, position, sign)`` tuples.

    Both tails are slices of ``phi(a_i)`` or of its inverse, because
    ``v a_i^-1`` is the prefix through the occurrence and ``v_bar^-1 a_i``
    is the inverse of the suffix starting at it.
    """
    out = []
    for i, w in enumerate(images, 1):
        if i not in w and -i not in w:
            continue
        winv = invert(w)
        m = len(w)
        for pos, x in enumerate(w):
            if x == i:
                out.append((w[:pos], winv[: m - pos - 1], i, pos, 1))
            elif x == -i:
                out.append((w[: pos + 1], winv[: m - pos], i, pos, -1))
    return out


def wagner_tails(phi: Endomorphism) -> list[TailPair]:
    """Slot 0 is the trivial pair; then one pair per occurrence of a_i^{+-1} in phi(a_i).

    Slots are numbered scanning i upward and positions left to right.
    """
    tails = [TailPair(0, EMPTY, EMPTY)]
    for slot, (w, w_bar, loc, pos, sign) in enumerate(raw_tails(phi.images), 1):
        tails.append(TailPair(slot, w, w_bar, loc, pos, sign))
    return tails


def _common_prefix(u: Word, v: Word) -> int:
    t = 0
    m = min(len(u), len(v))
    while t < m and u[t] == v[t]:
        t += 1
    return t


def _common_suffix(u: Word, v: Word) -> int:
    t = 0
    m = min(len(u), len(v))
    while t < m and u[-1 - t] == v[-1 - t]:
        t += 1
    return t


def _damage(images: Sequence[Word]) -> tuple[list[int], list[int]]:
    # phi(a_j)^-1 phi(a_i) cancels along the common prefix of the two images and
    # phi(a_i) phi(a_j)^-1 along the common suffix, so no inverse is ever built.
    by_first: dict[int, list] = {}
    by_last: dict[int, list] = {}
    for j, w in enumerate(images, 1):
        if w:
            by_first.setdefault(w[0], []).append((j, w))
            by_last.setdefault(w[-1], []).append((j, w))
    left, right = [], []
    for i, w in enumerate(images, 1):
        if not w:
            left.append(0)
            right.append(0)
            continue
        best = 0
        for _, u in by_last.get(-w[0], ()):
            best = max(best, cancel_len(u, w))
        for j, u in by_first.get(w[0], ()):
            if j != i:
                best = max(best, _common_prefix(u, w))
        left.append(best)
        best = 0
        for _, u in by_first.get(-w[-1], ()):
            best = max(best, cancel_len(w, u))
        for j, u in by_last.get(w[-1], ()):
            if j != i:
                best = max(best, _common_suffix(u, w))
        right.append(best)
    return left, right


def remnant(phi: Endomorphism) -> RemnantReport:
    """Cancellation damage on both ends of every image.

    ``left_damage[i]`` is the most any admissible signed image cancels
    into the front of ``phi(a_i)``; the formal inverse ``phi(a_i)^-1`` is
    the one product not admitted.  The map has remnant when every image
    keeps a nonempty middle.
    """
    left, right = _damage(phi.images)
    rest = [len(w) - a - b for w, a, b in zip(phi.images, left, right)]
    return RemnantReport(tuple(left), tuple(right), tuple(rest))


def has_remnant(images: Sequence[Word]) -> bool:
    if not all(images):
        return False
    left, right = _damage(images)
    return all(a + b < len(w) for w, a, b in zip(images, left, right))


def tail_equalities(tails: Sequence[TailPair]) -> list[TailEquality]:
    """Every pair of tail occurrences with equal value, except ``(W_0, W_bar_0)``."""
    groups: dict[Word, list[tuple[int, str]]] = {}
    for t in tails:
        groups.setdefault(t.w, []).append((t.slot, W_SIDE))
        groups.setdefault(t.w_bar, []).append((t.slot, W_BAR_SIDE))
    out = []
    for value, occ in groups.items():
        for a in range(len(occ)):
            for b in range(a + 1, len(occ)):
                if occ[a] == (0, W_SIDE) and occ[b] == (0, W_BAR_SIDE):
                    continue
                out.append(TailEquality(occ[a], occ[b], len(value)))
    out.sort(key=lambda e: (e.length, e.first, e.second))
    return out


def equality_lengths(images: Sequence[Word]) -> set[int]:
    """Lengths of all tail equalities, without building the records."""
    seen = {EMPTY}
    ks: set[int] = set()
    for w, w_bar, *_ in raw_tails(images):
        if w in seen:
            ks.add(len(w))
        else:
            seen.add(w)
        if w_bar in seen:
            ks.add(len(w_bar))
        else:
            seen.add(w_bar)
    return ks
