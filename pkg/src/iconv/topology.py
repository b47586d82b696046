"""Finite topological spaces.

Points are strings; subsets are bitmasks over ``points`` (bit i <-> points[i]).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .bits import bit_indices, full, is_subset
from .errors import AxiomViolation, DuplicatePoint, SpaceTooLarge, UnknownPoint

MAX_POINTS = 16


@dataclass(frozen=True)
class FiniteTopology:
    points: tuple[str, ...]
    opens: tuple[int, ...]

    @cached_property
    def index(self) -> dict[str, int]:
        return {p: i for i, p in enumerate(self.points)}

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def full(self) -> int:
        return full(len(self.points))

    def mask(self, subset: Iterable[str] | str) -> int:
        if isinstance(subset, str):
            subset = subset.split()
        m = 0
        for p in subset:
            try:
                m |= 1 << self.index[p]
            except KeyError:
                raise UnknownPoint(f"{p!r} is not a point of the space") from None
        return m

    def subset(self, mask: int) -> frozenset[str]:
        return frozenset(self.points[i] for i in bit_indices(mask))

    def render(self, mask: int) -> str:
        return "{" + " ".join(self.points[i] for i in bit_indices(mask)) + "}"

    def point_mask(self, p: str) -> int:
        try:
            return 1 << self.index[p]
        except KeyError:
            raise UnknownPoint(f"{p!r} is not a point of the space") from None

    def is_open(self, mask: int) -> bool:
        return mask in self._open_set

    @cached_property
    def _open_set(self) -> frozenset[int]:
        return frozenset(self.opens)

    @cached_property
    def closed(self) -> tuple[int, ...]:
        return tuple(sorted(self.full ^ u for u in self.opens))

    @cached_property
    def neighbourhood(self) -> tuple[int, ...]:
        """Smallest open set containing each point."""
        out = []
        for i in range(self.size):
            m = self.full
            for u in self.opens:
                if u >> i & 1:
                    m &= u
            out.append(m)
        return tuple(out)

    def opens_containing(self, i: int) -> list[int]:
        return [u for u in self.opens if u >> i & 1]

    def __str__(self) -> str:
        return "{ " + " ".join(self.render(u) for u in self.opens) + " }"


def validate_topology(points: Iterable[str], family: Iterable) -> FiniteTopology:
    """Check the open-set axioms and return the topology.

    `family` holds subsets given either as bitmasks or as iterables of points.
    All violations found are collected into a single :class:`AxiomViolation`.
    """
    points = tuple(points)
    if len(set(points)) != len(points):
        dup = next(p for p in points if points.count(p) > 1)
        raise DuplicatePoint(f"point {dup!r} listed twice")
    if len(points) > MAX_POINTS:
        raise SpaceTooLarge(f"{len(points)} points exceeds the cap of {MAX_POINTS}")
    index = {p: i for i, p in enumerate(points)}
    masks = set()
    for member in family:
        if isinstance(member, int):
            if member >> len(points):
                raise AxiomViolation([f"subset mask {member} draws outside the points"])
            masks.add(member)
            continue
        m = 0
        for p in member:
            if p not in index:
                raise AxiomViolation([f"open set uses unknown point {p!r}"])
            m |= 1 << index[p]
        masks.add(m)
    if not masks:
        raise AxiomViolation(["family is empty"])

    top = full(len(points))
    fmt = lambda m: "{" + " ".join(points[i] for i in bit_indices(m)) + "}"
    violations = []
    if 0 not in masks:
        violations.append("empty set missing")
    if top not in masks:
        violations.append(f"whole space {fmt(top)} missing")
    ordered = sorted(masks)
    for a, b in itertools.combinations(ordered, 2):
        if a | b not in masks:
            violations.append(f"union of {fmt(a)} and {fmt(b)} missing")
        if a & b not in masks:
            violations.append(f"intersection of {fmt(a)} and {fmt(b)} missing")
    if violations:
        raise AxiomViolation(violations)
    return FiniteTopology(points, tuple(ordered))


def closure_in(topology: FiniteTopology, subset: int) -> int:
    """Smallest closed superset of `subset`."""
    out = topology.full
    for c in topology.closed:
        if is_subset(subset, c):
            out &= c
    return out


def interior_in(topology: FiniteTopology, subset: int) -> int:
    out = 0
    for u in topology.opens:
        if is_subset(u, subset):
            out |= u
    return out


def discrete(points: Iterable[str]) -> FiniteTopology:
    points = tuple(points)
    return FiniteTopology(points, tuple(range(1 << len(points))))


def indiscrete(points: Iterable[str]) -> FiniteTopology:
    points = tuple(points)
    return FiniteTopology(points, tuple(sorted({0, full(len(points))})))


def sierpinski(open_point: str = "a", closed_point: str = "b") -> FiniteTopology:
    return FiniteTopology((open_point, closed_point), (0, 1, 3))


def enumerate_topologies(points: Iterable[str]) -> list[FiniteTopology]:
    """All topologies on the given points (at most 4), in a fixed order.

    Brute force over families containing the empty set and the whole space.
    """
    points = tuple(points)
    n = len(points)
    if n > 4:
        raise SpaceTooLarge("topology enumeration is capped at 4 points")
    top = full(n)
    middle = [m for m in range(1, top)]
    found = []
    for choice in range(1 << len(middle)):
        fam = {0, top}
        fam.update(m for k, m in enumerate(middle) if choice >> k & 1)
        if all(a | b in fam and a & b in fam for a in fam for b in fam):
            found.append(FiniteTopology(points, tuple(sorted(fam))))
    return found


def points_named(n: int) -> tuple[str, ...]:
    """Default point labels a, b, c, ..."""
    return tuple("abcdefghijklmnop"[:n])
