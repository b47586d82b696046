"""Brute-force reference implementations used as independent oracles.

Everything here works on plain Python sets of labels and follows the textbook
definitions directly; nothing is imported from the library except the data
classes needed to read inputs.
"""

from __future__ import annotations

import itertools
from typing import Iterable


def powerset(items: Iterable) -> list[frozenset]:
    items = list(items)
    return [frozenset(c) for k in range(len(items) + 1) for c in itertools.combinations(items, k)]


# --- topology ------------------------------------------------------------------

def is_topology(points, family) -> bool:
    points = frozenset(points)
    fam = {frozenset(f) for f in family}
    if frozenset() not in fam or points not in fam:
        return False
    for a in fam:
        if not a <= points:
            return False
        for b in fam:
            if a | b not in fam or a & b not in fam:
                return False
    return True


def closure(points, opens, subset) -> frozenset:
    """Smallest closed superset, by scanning every closed set."""
    points = frozenset(points)
    out = points
    for u in opens:
        c = points - frozenset(u)
        if frozenset(subset) <= c:
            out &= c
    return out


def all_topologies(points) -> list[frozenset]:
    """Every topology on `points` by filtering all families (feasible up to 3 points)."""
    points = tuple(points)
    subsets = powerset(points)
    middle = [s for s in subsets if s and len(s) < len(points)]
    out = []
    for k in range(len(middle) + 1):
        for extra in itertools.combinations(middle, k):
            fam = {frozenset(), frozenset(points), *extra}
            if is_topology(points, fam):
                out.append(frozenset(fam))
    return out


# --- ideals ------------------------------------------------------------------------

def is_ideal(ground, family) -> bool:
    fam = {frozenset(f) for f in family}
    if frozenset() not in fam:
        return False
    for a in fam:
        if any(frozenset(b) not in fam for b in powerset(a)):
            return False
        for b in fam:
            if a | b not in fam:
                return False
    return True


def nontrivial_ideals(ground) -> list[frozenset]:
    """Ideals I with I != {∅} and ground not in I, by filtering all families."""
    ground = frozenset(ground)
    subsets = [s for s in powerset(ground) if s != ground and s]
    out = []
    for k in range(1, len(subsets) + 1):
        for extra in itertools.combinations(subsets, k):
            fam = {frozenset(), *extra}
            if is_ideal(ground, fam):
                out.append(frozenset(fam))
    return out


# --- eventually periodic sets and sequences -----------------------------------------------

def window_members(s, upto: int) -> set[int]:
    return {n for n in range(1, upto + 1) if n in s}


def seq_values(prefix, cycle, count: int) -> list:
    out = list(prefix)
    while len(out) < count:
        out.extend(cycle)
    return out[:count]


def seq_bad_set_kind(prefix, cycle, inside) -> tuple[bool, set[int]]:
    """(bad set is finite, residues mod 2 of the bad positions in the periodic part)."""
    start = len(prefix) + 1
    period = 2 * len(cycle)
    vals = seq_values(prefix, cycle, start + period)
    bad = [n for n in range(start, start + period) if vals[n - 1] not in inside]
    return not bad, {n % 2 for n in bad}


def seq_converges(prefix, cycle, opens, points, ideal: str, x) -> bool:
    """ideal is 'fin' or 'even' (finite outside the even numbers)."""
    for u in opens:
        if x not in u:
            continue
        finite, residues = seq_bad_set_kind(prefix, cycle, u)
        if ideal == "fin" and not finite:
            return False
        if ideal == "even" and not residues <= {0}:
            return False
    return True


def seq_ordinary(prefix, cycle, opens, x) -> bool:
    return all(set(cycle) <= set(u) for u in opens if x in u)


# --- nets ------------------------------------------------------------------------

def net_converges(elements, values, ideal_family, opens, x) -> bool:
    for u in opens:
        if x in u:
            bad = frozenset(e for e, v in zip(elements, values) if v not in u)
            if bad not in ideal_family:
                return False
    return True


def net_cluster(elements, values, ideal_family, opens, x) -> bool:
    for u in opens:
        if x in u:
            good = frozenset(e for e, v in zip(elements, values) if v in u)
            if good in ideal_family:
                return False
    return True


def classical_converges(elements, geq, values, opens, x) -> bool:
    """Some d0 with every d >= d0 mapped into every open set around x."""
    val = dict(zip(elements, values))
    for d0 in elements:
        if all(val[d] in u for d in elements if geq(d, d0) for u in opens if x in u):
            return True
    return False


# --- the product ideal, straight from the split definition ------------------------------

def product_ideal_member(outer, inner_ideals, ideal_d, element_tuples, h) -> bool:
    """H in I_F iff H = H1 u H2 with proj(H1) in I_D and, when H2 is nonempty,
    proj(H2) not in I_D and, for every p in proj(H2), {g(p) : (p,g) in H2} in I_{E_p}.

    Elements are tuples (m, e_1, ..., e_k); g(p) is the coordinate for p.
    """
    pos = {m: i for i, m in enumerate(outer)}
    h = frozenset(h)
    for h2 in powerset(h):
        # every H1 with H1 u H2 = H: the rest of H plus any part of H2
        for extra in powerset(h2):
            h1 = (h - h2) | extra
            if frozenset(t[0] for t in h1) not in ideal_d:
                continue
            if not h2:
                return True
            proj2 = frozenset(t[0] for t in h2)
            if proj2 in ideal_d:
                continue
            if all(frozenset(t[1 + pos[p]] for t in h2 if t[0] == p) in inner_ideals[pos[p]] for p in proj2):
                return True
    return False
