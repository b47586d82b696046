"""Subsets of a small ordered ground set, encoded as int bitmasks."""

from __future__ import annotations

from typing import Iterator


def full(n: int) -> int:
    return (1 << n) - 1


def bit_indices(mask: int) -> Iterator[int]:
    """Yield the positions of set bits, lowest first."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


def submasks(mask: int) -> Iterator[int]:
    """Yield every submask of `mask`, including `mask` itself and 0."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


def superset_or(base: list[int], n: int) -> list[int]:
    """Return t with t[A] = OR of base[B] over all B subset of A (zeta transform)."""
    t = list(base)
    for i in range(n):
        bit = 1 << i
        for a in range(1 << n):
            if a & bit:
                t[a] |= t[a ^ bit]
    return t
