"""Membership in R_n, V'_n, V_n, A_{k,n}, B_n and Wecken certification.

Certification is one-sided: a map is reported Wecken only when it lies in
V_n or B_n.  Everything else with remnant is ``UNDETERMINED``; nothing is
ever reported non-Wecken.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass
from typing import Sequence

from .freegroup import Word
from .wagner import Endomorphism, TailPair, equality_lengths, has_remnant, wagner_tails


class WeckenStatus(str, enum.Enum):
    CERTIFIED_V = "certified_v"
    CERTIFIED_B = "certified_b"
    UNDETERMINED = "undetermined"
    NO_REMNANT = "no_remnant"

    @property
    def certified(self) -> bool:
        return self in (WeckenStatus.CERTIFIED_V, WeckenStatus.CERTIFIED_B)


class NoRemnantWarning(UserWarning):
    """The Nielsen bound was requested for a map without remnant."""


@dataclass(frozen=True)
class Classification:
    has_remnant: bool
    equality_lengths: frozenset[int]

    @property
    def in_Vprime(self) -> bool:
        return not self.equality_lengths

    @property
    def in_V(self) -> bool:
        return self.has_remnant and not self.equality_lengths

    @property
    def in_A0(self) -> bool:
        return self.has_remnant and 0 in self.equality_lengths

    def in_Ak(self, k: int) -> bool:
        return self.has_remnant and k in self.equality_lengths

    @property
    def Ak(self) -> list[int]:
        """The k >= 1 with the map in A_{k,n}."""
        if not self.has_remnant:
            return []
        return sorted(k for k in self.equality_lengths if k >= 1)

    @property
    def in_B(self) -> bool:
        return self.has_remnant and self.equality_lengths == {0}

    @property
    def wecken(self) -> WeckenStatus:
        if not self.has_remnant:
            return WeckenStatus.NO_REMNANT
        if not self.equality_lengths:
            return WeckenStatus.CERTIFIED_V
        if self.equality_lengths == {0}:
            return WeckenStatus.CERTIFIED_B
        return WeckenStatus.UNDETERMINED

    def to_dict(self) -> dict:
        return {
            "remnant": self.has_remnant,
            "equality_lengths": sorted(self.equality_lengths),
            "V": self.in_V,
            "Vprime": self.in_Vprime,
            "A0": self.in_A0,
            "Ak": self.Ak,
            "B": self.in_B,
            "wecken": self.wecken.value,
        }


def classify_images(images: Sequence[Word]) -> Classification:
    """Classification straight from image words; no validation."""
    return Classification(has_remnant(images), frozenset(equality_lengths(images)))


def classify(phi: Endomorphism) -> Classification:
    return classify_images(phi.images)


def is_A0_by_boundary(phi: Endomorphism) -> bool:
    """True iff some phi(a_i) begins or ends with a_i.

    Kept independent of the tail machinery; it must agree with
    ``0 in classify(phi).equality_lengths``.
    """
    return any(w and (w[0] == i or w[-1] == i) for i, w in enumerate(phi.images, 1))


@dataclass(frozen=True)
class FixedPointPartition:
    parts: tuple[tuple[int, ...], ...]

    @staticmethod
    def slot_index(slot: int) -> int:
        return 1 if slot == 0 else -1

    @property
    def part_indices(self) -> tuple[int, ...]:
        return tuple(sum(self.slot_index(s) for s in part) for part in self.parts)

    def part_of(self, slot: int) -> tuple[int, ...]:
        for part in self.parts:
            if slot in part:
                return part
        raise KeyError(slot)


def fixed_point_partition(tails: Sequence[TailPair]) -> FixedPointPartition:
    """Finest partition of slots in which slots sharing a tail value are together.

    Slots with disjoint tail sets can never be combined by a homotopy, so
    merging on any shared value can only over-merge.
    """
    parent = list(range(len(tails)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    owner: dict[Word, int] = {}
    for t in tails:
        for value in (t.w, t.w_bar):
            if value in owner:
                ra, rb = find(owner[value]), find(t.slot)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
            else:
                owner[value] = t.slot
    groups: dict[int, list[int]] = {}
    for t in tails:
        groups.setdefault(find(t.slot), []).append(t.slot)
    parts = sorted(tuple(sorted(g)) for g in groups.values())
    return FixedPointPartition(tuple(parts))


def nielsen_lower_bound(phi: Endomorphism) -> int:
    """Number of parts with nonzero index sum (slot 0 has index +1, the rest -1).

    Exact for certified maps.  Without remnant the count is not justified:
    a :class:`NoRemnantWarning` is issued and 0 is returned.
    """
    if not has_remnant(phi.images):
        warnings.warn("map has no remnant; Nielsen bound not available", NoRemnantWarning, stacklevel=2)
        return 0
    partition = fixed_point_partition(wagner_tails(phi))
    return sum(1 for idx in partition.part_indices if idx != 0)
