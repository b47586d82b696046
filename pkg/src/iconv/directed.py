"""Finite directed sets, residuals, the order ideal I_0 and product orders."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Hashable, Iterable, Sequence

from .bits import bit_indices, full, is_subset
from .errors import (
    GroundMismatch,
    NotReflexive,
    NotTransitive,
    NoUpperBound,
    TooLarge,
    UnknownElement,
)
from .ideals import FiniteIdeal

MAX_DIRECTED = 8
MAX_PRODUCT = 64


@dataclass(frozen=True)
class DirectedSet:
    """Elements plus, for each element n, the mask of its residual {k : k >= n}."""

    elements: tuple
    up: tuple[int, ...]

    @cached_property
    def index(self) -> dict:
        return {e: i for i, e in enumerate(self.elements)}

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def full(self) -> int:
        return full(len(self.elements))

    def geq(self, m, n) -> bool:
        return bool(self.up[self.index[n]] >> self.index[m] & 1)

    def mask(self, elements: Iterable) -> int:
        m = 0
        for e in elements:
            try:
                m |= 1 << self.index[e]
            except KeyError:
                raise UnknownElement(f"{e!r} is not an element of the directed set") from None
        return m

    def subset(self, mask: int) -> frozenset:
        return frozenset(self.elements[i] for i in bit_indices(mask))

    def render(self, mask: int) -> str:
        return "{" + " ".join(label(self.elements[i]) for i in bit_indices(mask)) + "}"

    @cached_property
    def top(self) -> int:
        """Mask of the elements lying above every element (nonempty when finite)."""
        out = self.full
        for u in self.up:
            out &= u
        return out

    def restrict(self, mask: int) -> "DirectedSet":
        """Subset with the inherited order (not re-validated)."""
        idx = list(bit_indices(mask))
        pos = {old: new for new, old in enumerate(idx)}
        up = []
        for old in idx:
            m = 0
            for k in bit_indices(self.up[old] & mask):
                m |= 1 << pos[k]
            up.append(m)
        return DirectedSet(tuple(self.elements[i] for i in idx), tuple(up))

    def __str__(self) -> str:
        pairs = [
            f"{label(self.elements[n])}<={label(self.elements[k])}"
            for n in range(len(self.elements))
            for k in bit_indices(self.up[n])
            if k != n
        ]
        return "[" + " ".join(label(e) for e in self.elements) + "] {" + " ".join(pairs) + "}"


def label(element: Hashable) -> str:
    if isinstance(element, tuple):
        return "(" + ",".join(label(e) for e in element) + ")"
    return str(element)


def validate_directed(elements: Sequence, geq: Sequence[Sequence[bool]]) -> DirectedSet:
    """Validate a square table with ``geq[m][n]`` meaning elements[m] >= elements[n]."""
    elements = tuple(elements)
    n = len(elements)
    if n == 0:
        raise NoUpperBound("<empty>", "<empty>")
    if n > MAX_DIRECTED:
        raise TooLarge(f"{n} elements exceeds the directed-set cap of {MAX_DIRECTED}")
    if len(set(elements)) != n:
        raise UnknownElement("directed set lists an element twice")
    if len(geq) != n or any(len(row) != n for row in geq):
        raise UnknownElement("order table is not square over the elements")
    for m in range(n):
        if not geq[m][m]:
            raise NotReflexive(elements[m])
    for m, k, p in itertools.product(range(n), repeat=3):
        if geq[m][k] and geq[k][p] and not geq[m][p]:
            raise NotTransitive(elements[m], elements[k], elements[p])
    for m, k in itertools.combinations(range(n), 2):
        if not any(geq[p][m] and geq[p][k] for p in range(n)):
            raise NoUpperBound(elements[m], elements[k])
    up = tuple(sum(1 << k for k in range(n) if geq[k][j]) for j in range(n))
    return DirectedSet(elements, up)


def from_pairs(elements: Sequence, below: Iterable[tuple]) -> DirectedSet:
    """Directed set from pairs (lo, hi) meaning lo <= hi; closed reflexively and transitively."""
    elements = tuple(elements)
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    geq = [[i == j for j in range(n)] for i in range(n)]
    for lo, hi in below:
        if lo not in index or hi not in index:
            raise UnknownElement(f"pair ({lo}, {hi}) uses an unknown element")
        geq[index[hi]][index[lo]] = True
    for k in range(n):
        for i in range(n):
            if geq[i][k]:
                for j in range(n):
                    if geq[k][j]:
                        geq[i][j] = True
    return validate_directed(elements, geq)


def table(directed: DirectedSet) -> list[list[bool]]:
    n = len(directed)
    return [[bool(directed.up[j] >> i & 1) for j in range(n)] for i in range(n)]


def residual(directed: DirectedSet, n) -> int:
    """Mask of M_n = {k : k >= n}."""
    if n not in directed.index:
        raise UnknownElement(f"{n!r} is not an element of the directed set")
    return directed.up[directed.index[n]]


def order_ideal_I0(directed: DirectedSet) -> FiniteIdeal:
    """I_0: complements of the sets that contain some residual."""
    top = directed.full
    f0 = {a for a in range(top + 1) if any(is_subset(u, a) for u in directed.up)}
    return FiniteIdeal(directed.elements, frozenset(top ^ a for a in f0))


def is_d_admissible(ideal, directed: DirectedSet) -> bool:
    """Nontrivial and every residual lies in the dual filter."""
    if tuple(ideal.ground) != directed.elements:
        raise GroundMismatch("ideal ground differs from the directed set's elements")
    if not ideal.nontrivial:
        return False
    top = directed.full
    return all(ideal.contains(top ^ u) for u in directed.up)


def d_admissible_ideals(directed: DirectedSet) -> list[FiniteIdeal]:
    from .ideals import enumerate_ideals

    return [i for i in enumerate_ideals(directed.elements) if is_d_admissible(i, directed)]


def product_directed(factors: Sequence[DirectedSet], limit: int = MAX_PRODUCT) -> DirectedSet:
    """Cartesian product with the componentwise order; elements are tuples."""
    factors = tuple(factors)
    return _product(factors, limit)


@lru_cache(maxsize=256)
def _product(factors: tuple[DirectedSet, ...], limit: int) -> DirectedSet:
    size = 1
    for f in factors:
        size *= len(f)
    if size > limit:
        raise TooLarge(f"product has {size} elements, cap is {limit}")
    combos = list(itertools.product(*(range(len(f)) for f in factors)))
    elements = tuple(tuple(f.elements[i] for f, i in zip(factors, c)) for c in combos)
    # up-set of a tuple = product of the factor up-sets; build via per-factor masks over combos
    per_factor = []
    for a, f in enumerate(factors):
        cols = []
        for i in range(len(f)):
            cols.append(sum(1 << x for x, c in enumerate(combos) if f.up[i] >> c[a] & 1))
        per_factor.append(cols)
    up = []
    for c in combos:
        m = full(size)
        for a, i in enumerate(c):
            m &= per_factor[a][i]
        up.append(m)
    return DirectedSet(elements, tuple(up))


# --- named shapes -----------------------------------------------------------

def chain(n_or_labels) -> DirectedSet:
    labels = [str(i) for i in range(1, n_or_labels + 1)] if isinstance(n_or_labels, int) else list(n_or_labels)
    return from_pairs(labels, zip(labels, labels[1:]))


def vee() -> DirectedSet:
    """p, q below a common top t."""
    return from_pairs(["p", "q", "t"], [("p", "t"), ("q", "t")])


def diamond() -> DirectedSet:
    return from_pairs(["p", "q", "r", "s"], [("p", "r"), ("p", "s"), ("q", "r"), ("q", "s"), ("r", "s")])


def cluster() -> DirectedSet:
    """A preorder: 1 below two mutually comparable tops u, v."""
    return from_pairs(["1", "u", "v"], [("1", "u"), ("u", "v"), ("v", "u")])


SHAPES = {
    "chain1": lambda: chain(1),
    "chain2": lambda: chain(2),
    "chain3": lambda: chain(3),
    "chain4": lambda: chain(4),
    "vee3": vee,
    "cluster3": cluster,
    "diamond4": diamond,
}

# the exhaustive net catalog: six shapes of at most four elements
NET_SHAPE_CATALOG = ("chain2", "chain3", "chain4", "vee3", "cluster3", "diamond4")


def shape(name: str) -> DirectedSet:
    try:
        return SHAPES[name]()
    except KeyError:
        raise UnknownElement(f"unknown directed-set shape {name!r}") from None


def is_cofinal(directed: DirectedSet, mask: int) -> bool:
    return all(directed.up[n] & mask for n in range(len(directed)))



def _canonical_up(n: int, up: tuple[int, ...]) -> tuple:
    best = None
    for perm in itertools.permutations(range(n)):
        # relabel element i as perm[i]
        new = [0] * n
        for i in range(n):
            new[perm[i]] = sum(1 << perm[k] for k in bit_indices(up[i]))
        key = tuple(new)
        if best is None or key < best:
            best = key
    return best


@lru_cache(maxsize=8)
def enumerate_directed(n: int) -> tuple[DirectedSet, ...]:
    """Directed preorders on n elements, one per isomorphism class (n <= 4)."""
    if n > 4:
        raise TooLarge("directed-set enumeration is capped at 4 elements")
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    seen = set()
    out = []
    for choice in range(1 << len(pairs)):
        geq = [[i == j for j in range(n)] for i in range(n)]
        for k, (i, j) in enumerate(pairs):
            if choice >> k & 1:
                geq[i][j] = True
        if any(geq[i][k] and geq[k][j] and not geq[i][j] for i in range(n) for k in range(n) for j in range(n)):
            continue
        if any(not any(geq[p][i] and geq[p][j] for p in range(n)) for i in range(n) for j in range(n)):
            continue
        up = tuple(sum(1 << k for k in range(n) if geq[k][j]) for j in range(n))
        key = _canonical_up(n, up)
        if key in seen:
            continue
        seen.add(key)
        out.append(DirectedSet(tuple(str(i + 1) for i in range(n)), key))
    return tuple(out)
