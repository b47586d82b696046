"""Eventually periodic subsets of the naturals (indexed from 1) and ideals on them.

An :class:`EpSet` is described by a threshold N, a modulus M, a residue set
and an explicit prefix: ``n`` is a member iff ``n in prefix`` when ``n <= N``,
otherwise iff ``n % M in residues``. Every value is kept in canonical form
(minimal modulus, then minimal threshold), so equality is structural.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Callable, Iterable

from .errors import InputError


def _divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


@dataclass(frozen=True)
class EpSet:
    threshold: int
    modulus: int
    residues: frozenset
    prefix: frozenset

    @staticmethod
    def make(threshold: int, modulus: int, residues: Iterable[int], prefix: Iterable[int] = ()) -> "EpSet":
        if modulus < 1:
            raise InputError("modulus must be at least 1")
        if threshold < 0:
            raise InputError("threshold must be non-negative")
        prefix = set(prefix)
        if any(n < 1 or n > threshold for n in prefix):
            raise InputError("prefix members must lie in 1..threshold")
        return _canonical(threshold, modulus, frozenset(r % modulus for r in residues), frozenset(prefix))

    @staticmethod
    def finite(items: Iterable[int]) -> "EpSet":
        items = set(items)
        if any(n < 1 for n in items):
            raise InputError("naturals start at 1")
        return EpSet.make(max(items, default=0), 1, (), items)

    @staticmethod
    def progression(modulus: int, residues: Iterable[int]) -> "EpSet":
        return EpSet.make(0, modulus, residues)

    @staticmethod
    def from_predicate(threshold: int, modulus: int, member: Callable[[int], bool]) -> "EpSet":
        """Sample `member` on 1..threshold and on one period beyond it."""
        prefix = {n for n in range(1, threshold + 1) if member(n)}
        residues = {n % modulus for n in range(threshold + 1, threshold + 1 + modulus) if member(n)}
        return _canonical(threshold, modulus, frozenset(residues), frozenset(prefix))

    def __contains__(self, n: int) -> bool:
        return ep_member(self, n)

    def __str__(self) -> str:
        fmt = lambda xs: "{" + " ".join(map(str, sorted(xs))) + "}"
        if not self.residues:
            return "finite " + fmt(self.prefix)
        text = f"mod {self.modulus} {fmt(self.residues)}"
        if self.threshold:
            text += f" above {self.threshold} prefix {fmt(self.prefix)}"
        return text


def _tail_member(s: EpSet, n: int) -> bool:
    return n % s.modulus in s.residues


def _canonical(threshold: int, modulus: int, residues: frozenset, prefix: frozenset) -> EpSet:
    for d in _divisors(modulus):
        if all((r in residues) == ((r + d) % modulus in residues) for r in range(modulus)):
            modulus, residues = d, frozenset(r % d for r in residues)
            break
    prefix = set(prefix)
    while threshold > 0 and ((threshold in prefix) == (threshold % modulus in residues)):
        prefix.discard(threshold)
        threshold -= 1
    return EpSet(threshold, modulus, residues, frozenset(prefix))


def ep_member(s: EpSet, n: int) -> bool:
    if n < 1:
        return False
    if n <= s.threshold:
        return n in s.prefix
    return _tail_member(s, n)


def _combine(a: EpSet, b: EpSet, op: Callable[[bool, bool], bool]) -> EpSet:
    threshold = max(a.threshold, b.threshold)
    modulus = lcm(a.modulus, b.modulus)
    prefix = {n for n in range(1, threshold + 1) if op(ep_member(a, n), ep_member(b, n))}
    residues = set()
    for r in range(modulus):
        n = threshold + 1 + (r - threshold - 1) % modulus
        if op(ep_member(a, n), ep_member(b, n)):
            residues.add(r)
    return _canonical(threshold, modulus, frozenset(residues), frozenset(prefix))


@lru_cache(maxsize=1 << 16)
def ep_union(a: EpSet, b: EpSet) -> EpSet:
    return _combine(a, b, lambda x, y: x or y)


@lru_cache(maxsize=1 << 16)
def ep_intersect(a: EpSet, b: EpSet) -> EpSet:
    return _combine(a, b, lambda x, y: x and y)


@lru_cache(maxsize=1 << 16)
def ep_difference(a: EpSet, b: EpSet) -> EpSet:
    return _combine(a, b, lambda x, y: x and not y)


def ep_complement(a: EpSet) -> EpSet:
    return _canonical(
        a.threshold,
        a.modulus,
        frozenset(r for r in range(a.modulus) if r not in a.residues),
        frozenset(n for n in range(1, a.threshold + 1) if n not in a.prefix),
    )


def ep_is_finite(a: EpSet) -> bool:
    return not a.residues


def ep_is_subset(a: EpSet, b: EpSet) -> bool:
    return ep_difference(a, b) == EMPTY


def natural_density(s: EpSet) -> Fraction:
    """lim |S ∩ {1..n}| / n, which always exists for an eventually periodic set."""
    return Fraction(len(s.residues), s.modulus)


EMPTY = EpSet.make(0, 1, ())
NATURALS = EpSet.make(0, 1, (0,))
EVENS = EpSet.progression(2, (0,))
ODDS = EpSet.progression(2, (1,))


@dataclass(frozen=True)
class NatIdeal:
    """Decidable ideals on the naturals.

    ``fin`` is the ideal of finite sets; ``residue`` with modulus M and classes P
    holds the sets that are finite outside the residue classes P (P a proper
    subset of 0..M-1). ``power`` (every set) is trivial and exists only as a
    negative control.
    """

    kind: str
    modulus: int = 1
    classes: frozenset = frozenset()

    @staticmethod
    def fin() -> "NatIdeal":
        return NatIdeal("fin")

    @staticmethod
    def residue(modulus: int, classes: Iterable[int]) -> "NatIdeal":
        classes = frozenset(classes)
        if modulus < 1:
            raise InputError("modulus must be at least 1")
        if any(c < 0 or c >= modulus for c in classes):
            raise InputError(f"residue classes must lie in 0..{modulus - 1}")
        if len(classes) == modulus:
            raise InputError("residue classes must be a proper subset (the ideal would contain every natural)")
        return NatIdeal("residue", modulus, classes)

    @staticmethod
    def power() -> "NatIdeal":
        return NatIdeal("power")

    @property
    def nontrivial(self) -> bool:
        return self.kind != "power"

    def contains(self, s: EpSet) -> bool:
        return nat_ideal_member(self, s)

    def __str__(self) -> str:
        if self.kind == "residue":
            return f"residue mod {self.modulus} classes {{{' '.join(map(str, sorted(self.classes)))}}}"
        return self.kind


@lru_cache(maxsize=1 << 16)
def nat_ideal_member(ideal: NatIdeal, s: EpSet) -> bool:
    if ideal.kind == "fin":
        return ep_is_finite(s)
    if ideal.kind == "power":
        return True
    allowed = EpSet.progression(ideal.modulus, ideal.classes)
    return ep_is_finite(ep_difference(s, allowed))


def parse_epset(text: str) -> EpSet:
    """Parse the small set language used by the CLI.

    Forms: ``evens``, ``odds``, ``all``, ``empty``, ``finite {1 5}``,
    ``mod M {r ...}`` optionally followed by ``above N prefix {n ...}``.
    """
    tokens = text.replace("{", " { ").replace("}", " } ").split()
    if not tokens:
        raise InputError("empty set expression")
    named = {"evens": EVENS, "odds": ODDS, "all": NATURALS, "naturals": NATURALS, "empty": EMPTY}
    if len(tokens) == 1 and tokens[0] in named:
        return named[tokens[0]]
    pos = 0

    def braces() -> list[int]:
        nonlocal pos
        if pos >= len(tokens) or tokens[pos] != "{":
            raise InputError(f"expected '{{' in set expression {text!r}")
        end = tokens.index("}", pos) if "}" in tokens[pos:] else -1
        if end < 0:
            raise InputError(f"unclosed brace in set expression {text!r}")
        try:
            items = [int(t) for t in tokens[pos + 1:end]]
        except ValueError:
            raise InputError(f"non-integer in set expression {text!r}") from None
        pos = end + 1
        return items

    def integer() -> int:
        nonlocal pos
        try:
            value = int(tokens[pos])
        except (IndexError, ValueError):
            raise InputError(f"expected an integer in set expression {text!r}") from None
        pos += 1
        return value

    head = tokens[pos]
    pos += 1
    if head == "finite":
        result = EpSet.finite(braces())
    elif head == "mod":
        modulus = integer()
        residues = braces()
        threshold, prefix = 0, []
        if pos < len(tokens) and tokens[pos] == "above":
            pos += 1
            threshold = integer()
            if pos < len(tokens) and tokens[pos] == "prefix":
                pos += 1
                prefix = braces()
        result = EpSet.make(threshold, modulus, residues, prefix)
    else:
        raise InputError(f"unknown set expression head {head!r}")
    if pos != len(tokens):
        raise InputError(f"trailing tokens in set expression {text!r}")
    return result
