"""Ideals and filters on a finite ground set, with the complement duality."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .bits import bit_indices, full, submasks
from .errors import (
    GroundTooLarge,
    MissingEmptySet,
    NotDownwardClosed,
    NotIntersectionClosed,
    NotUnionClosed,
    NotUpwardClosed,
    TrivialIdeal,
    UnknownElement,
)

MAX_GROUND = 8
MAX_ENUMERATED_GROUND = 4


def _mask_of(ground: tuple, index: dict, member) -> int:
    if isinstance(member, int) and not isinstance(member, bool):
        if member >> len(ground):
            raise UnknownElement(f"mask {member} draws outside the ground set")
        return member
    m = 0
    for e in member:
        if e not in index:
            raise UnknownElement(f"{e!r} is not in the ground set")
        m |= 1 << index[e]
    return m


class _Family:
    ground: tuple
    members: frozenset

    @cached_property
    def index(self) -> dict:
        return {e: i for i, e in enumerate(self.ground)}

    @property
    def full(self) -> int:
        return full(len(self.ground))

    def mask(self, elements: Iterable) -> int:
        return _mask_of(self.ground, self.index, elements)

    def subset(self, mask: int) -> frozenset:
        return frozenset(self.ground[i] for i in bit_indices(mask))

    def render(self, mask: int) -> str:
        return "{" + " ".join(str(self.ground[i]) for i in bit_indices(mask)) + "}"

    def contains(self, mask: int) -> bool:
        return mask in self.members

    def __contains__(self, mask: int) -> bool:
        return mask in self.members

    def __str__(self) -> str:
        return "{ " + " ".join(self.render(m) for m in sorted(self.members)) + " }"


@dataclass(frozen=True)
class FiniteIdeal(_Family):
    ground: tuple
    members: frozenset

    @cached_property
    def top(self) -> int:
        """Union of all members; on a finite ground the ideal is its powerset."""
        out = 0
        for m in self.members:
            out |= m
        return out

    @property
    def nontrivial(self) -> bool:
        return self.members != frozenset({0}) and self.full not in self.members

    @property
    def admissible(self) -> bool:
        return all(1 << i in self.members for i in range(len(self.ground)))


@dataclass(frozen=True)
class FiniteFilter(_Family):
    ground: tuple
    members: frozenset


def _check_ground(ground) -> tuple:
    ground = tuple(ground)
    if len(ground) > MAX_GROUND:
        raise GroundTooLarge(f"ground of {len(ground)} exceeds the cap of {MAX_GROUND}")
    if len(set(ground)) != len(ground):
        raise UnknownElement("ground set lists an element twice")
    return ground


def validate_ideal(ground: Iterable, family: Iterable) -> FiniteIdeal:
    ground = _check_ground(ground)
    index = {e: i for i, e in enumerate(ground)}
    members = frozenset(_mask_of(ground, index, m) for m in family)
    if 0 not in members:
        raise MissingEmptySet("the empty set must be a member of an ideal")
    ideal = FiniteIdeal(ground, members)
    for a in sorted(members):
        for i in bit_indices(a):
            # single-element removals suffice: downward closure follows by induction
            if a ^ (1 << i) not in members:
                raise NotDownwardClosed(ideal.render(a), ideal.render(a ^ (1 << i)))
    ordered = sorted(members)
    for x, a in enumerate(ordered):
        for b in ordered[x + 1:]:
            if a | b not in members:
                raise NotUnionClosed(ideal.render(a), ideal.render(b))
    return ideal


def validate_filter(ground: Iterable, family: Iterable) -> FiniteFilter:
    ground = _check_ground(ground)
    index = {e: i for i, e in enumerate(ground)}
    members = frozenset(_mask_of(ground, index, m) for m in family)
    filt = FiniteFilter(ground, members)
    if not members:
        raise MissingEmptySet("a filter is a non-empty family")
    if 0 in members:
        raise TrivialIdeal("the empty set must not belong to a filter")
    top = full(len(ground))
    for a in sorted(members):
        for i in range(len(ground)):
            if not a >> i & 1 and a | (1 << i) not in members:
                raise NotUpwardClosed(f"{filt.render(a | 1 << i)} contains {filt.render(a)} but is missing")
    ordered = sorted(members)
    for x, a in enumerate(ordered):
        for b in ordered[x + 1:]:
            if a & b not in members:
                raise NotIntersectionClosed(f"intersection of {filt.render(a)} and {filt.render(b)} missing")
    assert top in members
    return filt


def principal_ideal(ground: Iterable, top: int) -> FiniteIdeal:
    """The ideal of all subsets of `top`."""
    ground = _check_ground(ground)
    return FiniteIdeal(ground, frozenset(submasks(top)))


def dual_filter(ideal: FiniteIdeal) -> FiniteFilter:
    """F(I) = {A : ground - A in I}."""
    top = ideal.full
    if top in ideal.members:
        raise TrivialIdeal("the ideal contains the whole ground set; its dual would contain the empty set")
    return FiniteFilter(ideal.ground, frozenset(top ^ m for m in ideal.members))


def dual_ideal(filt: FiniteFilter) -> FiniteIdeal:
    top = filt.full
    return FiniteIdeal(filt.ground, frozenset(top ^ m for m in filt.members))


def enumerate_ideals(ground: Iterable) -> list[FiniteIdeal]:
    """All nontrivial ideals on a ground of at most four elements.

    A finite ideal is closed under finite unions, so it is the powerset of the
    union of its members; nontrivial ideals are exactly the powersets of the
    nonempty proper subsets. Ordered by that generating subset's mask.
    """
    ground = tuple(ground)
    if len(ground) > MAX_ENUMERATED_GROUND:
        raise GroundTooLarge(f"ideal enumeration is capped at {MAX_ENUMERATED_GROUND} elements")
    top = full(len(ground))
    return [principal_ideal(ground, a) for a in range(1, top)]


def is_ideal_family(members: frozenset[int]) -> bool:
    """Axiom test used by brute-force oracles (no witnesses)."""
    if 0 not in members:
        return False
    for a in members:
        for b in members:
            if a | b not in members:
                return False
        for s in submasks(a):
            if s not in members:
                return False
    return True

