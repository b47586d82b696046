"""Ideal convergence of eventually periodic sequences and sequence classes.

Every sequence here is eventually periodic, so each index set of the form
{n : x_n not in U} is an :class:`~iconv.epset.EpSet` and membership in a
:class:`~iconv.epset.NatIdeal` is decided exactly.
"""

from __future__ import annotations

import itertools
from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import lcm
from typing import Iterable, Sequence

from .epset import EpSet, NatIdeal, ep_is_finite, ep_member
from .errors import AxiomViolation, FiniteSelection, InputError, PositionOutOfRange, SpaceTooLarge, UnknownPoint
from .topology import FiniteTopology, validate_topology
from .verdict import Verdict

MAX_GENERATED_POINTS = 12


@dataclass(frozen=True)
class PeriodicSequence:
    prefix: tuple[str, ...]
    cycle: tuple[str, ...]

    @staticmethod
    def make(prefix: Sequence[str], cycle: Sequence[str]) -> "PeriodicSequence":
        return _canonical(tuple(prefix), tuple(cycle))

    @staticmethod
    def constant(x: str) -> "PeriodicSequence":
        return PeriodicSequence((), (x,))

    def value(self, n: int) -> str:
        if n < 1:
            raise PositionOutOfRange("sequence indices start at 1")
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        return self.cycle[(n - len(self.prefix) - 1) % len(self.cycle)]

    def values(self, count: int) -> list[str]:
        return [self.value(n) for n in range(1, count + 1)]

    @cached_property
    def range(self) -> frozenset[str]:
        return frozenset(self.prefix) | frozenset(self.cycle)

    @property
    def tail(self) -> frozenset[str]:
        """Values taken infinitely often."""
        return frozenset(self.cycle)

    def index_set(self, inside: frozenset[str], want_inside: bool = True) -> EpSet:
        """{n : (x_n in inside) == want_inside} as an exact EpSet."""
        return _index_set(self, inside, want_inside)

    def __str__(self) -> str:
        head = "[" + " ".join(self.prefix) + "]" if self.prefix else ""
        return head + "(" + " ".join(self.cycle) + ")"


def _canonical(prefix: tuple, cycle: tuple) -> PeriodicSequence:
    if not cycle:
        raise InputError("a periodic sequence needs a nonempty cycle")
    n = len(cycle)
    for d in range(1, n + 1):
        if n % d == 0 and cycle == cycle[:d] * (n // d):
            cycle = cycle[:d]
            break
    prefix = list(prefix)
    while prefix and prefix[-1] == cycle[-1]:
        cycle = (prefix.pop(),) + cycle[:-1]
    return PeriodicSequence(tuple(prefix), cycle)


@lru_cache(maxsize=1 << 18)
def _index_set(s: PeriodicSequence, inside: frozenset, want_inside: bool) -> EpSet:
    return EpSet.from_predicate(len(s.prefix), len(s.cycle), lambda n: (s.value(n) in inside) == want_inside)


def parse_sequence(text: str) -> PeriodicSequence:
    """Parse ``[p1 p2](c1 c2)`` or ``(c1 c2)``."""
    text = text.strip()
    prefix: list[str] = []
    if text.startswith("["):
        end = text.find("]")
        if end < 0:
            raise InputError(f"unclosed '[' in sequence {text!r}")
        prefix = text[1:end].split()
        text = text[end + 1:].strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise InputError("a sequence needs a parenthesised cycle, e.g. [b](a)")
    return PeriodicSequence.make(prefix, text[1:-1].split())


# --- convergence -------------------------------------------------------------

def _check_points(s: PeriodicSequence, topology: FiniteTopology) -> None:
    for p in s.range:
        if p not in topology.index:
            raise UnknownPoint(f"sequence value {p!r} is not a point of the space")


@lru_cache(maxsize=4096)
def _open_points(topology: FiniteTopology) -> tuple[tuple[int, frozenset], ...]:
    return tuple((u, topology.subset(u)) for u in topology.opens)


def seq_i_converges(s: PeriodicSequence, topology: FiniteTopology, ideal: NatIdeal, x0: str) -> bool:
    """x0 is an I-limit: for every open U containing x0, {n : x_n not in U} is in I."""
    i = topology.index.get(x0)
    if i is None:
        raise UnknownPoint(f"{x0!r} is not a point of the space")
    _check_points(s, topology)
    for u, pts in _open_points(topology):
        if u >> i & 1 and not ideal.contains(s.index_set(pts, False)):
            return False
    return True


def seq_i_limits(s: PeriodicSequence, topology: FiniteTopology, ideal: NatIdeal) -> frozenset[str]:
    return frozenset(x for x in topology.points if seq_i_converges(s, topology, ideal, x))


def seq_i_cluster_points(s: PeriodicSequence, topology: FiniteTopology, ideal: NatIdeal) -> frozenset[str]:
    _check_points(s, topology)
    out = set()
    for i, x in enumerate(topology.points):
        if all(not ideal.contains(s.index_set(pts, True)) for u, pts in _open_points(topology) if u >> i & 1):
            out.add(x)
    return frozenset(out)


def ordinary_converges(s: PeriodicSequence, topology: FiniteTopology, x0: str) -> bool:
    """Eventually inside every neighbourhood: the cycle lies in the smallest open set at x0."""
    _check_points(s, topology)
    nbhd = topology.neighbourhood[topology.index[x0]]
    return all(nbhd >> topology.index[p] & 1 for p in s.cycle)


# --- sequence operations -------------------------------------------------------

def _unrolled(s: PeriodicSequence, length: int) -> tuple[list[str], tuple[str, ...]]:
    """Equivalent (prefix, cycle) with a prefix of at least `length` terms."""
    k = max(0, length - len(s.prefix))
    prefix = s.values(len(s.prefix) + k)
    shift = k % len(s.cycle)
    return prefix, s.cycle[shift:] + s.cycle[:shift]


def insert_terms(s: PeriodicSequence, insertions: Iterable[tuple[int, str]]) -> PeriodicSequence:
    """Splice terms in, one at a time; (p, x) makes x the p-th term of the new sequence."""
    for position, point in insertions:
        if position < 1:
            raise PositionOutOfRange(f"insertion position {position} is before the first term")
        prefix, cycle = _unrolled(s, position - 1)
        prefix.insert(position - 1, point)
        s = _canonical(tuple(prefix), cycle)
    return s


def subsequence(s: PeriodicSequence, selector: EpSet) -> PeriodicSequence:
    """The terms of `s` at the (infinitely many) indices in `selector`, in order."""
    if ep_is_finite(selector):
        raise FiniteSelection("a subsequence needs an infinite index set")
    return _subsequence(s, selector)


@lru_cache(maxsize=1 << 18)
def _subsequence(s: PeriodicSequence, selector: EpSet) -> PeriodicSequence:
    start = max(len(s.prefix), selector.threshold)
    period = lcm(len(s.cycle), selector.modulus)
    prefix = [s.value(n) for n in range(1, start + 1) if ep_member(selector, n)]
    cycle = [s.value(n) for n in range(start + 1, start + period + 1) if ep_member(selector, n)]
    return _canonical(tuple(prefix), tuple(cycle))


# --- catalogs ----------------------------------------------------------------

Insertion = tuple[tuple[int, str], ...]


@dataclass(frozen=True)
class SeqCatalog:
    """Finite stand-in for "all sequences", "all subsequences", "all insertions"."""

    points: tuple[str, ...]
    universe: tuple[PeriodicSequence, ...]
    selectors: tuple[EpSet, ...]
    insertions: tuple[Insertion, ...]

    @cached_property
    def universe_set(self) -> frozenset[PeriodicSequence]:
        return frozenset(self.universe)

    @cached_property
    def insertion_edges(self) -> tuple[tuple[PeriodicSequence, Insertion, PeriodicSequence], ...]:
        """(s, pattern, t) with both ends in the universe and t != s."""
        out = []
        for s in self.universe:
            seen = set()
            for pattern in self.insertions:
                t = insert_terms(s, pattern)
                if t != s and t in self.universe_set and t not in seen:
                    seen.add(t)
                    out.append((s, pattern, t))
        return tuple(out)

    @cached_property
    def subsequence_edges(self) -> tuple[tuple[PeriodicSequence, EpSet, PeriodicSequence], ...]:
        out = []
        for s in self.universe:
            seen = set()
            for sel in self.selectors:
                t = _subsequence(s, sel)
                if t != s and t in self.universe_set and t not in seen:
                    seen.add(t)
                    out.append((s, sel, t))
        return tuple(out)


def sequence_universe(points: Sequence[str], max_prefix: int = 3, max_cycle: int = 3) -> tuple[PeriodicSequence, ...]:
    found = set()
    for p in range(max_prefix + 1):
        for c in range(1, max_cycle + 1):
            for prefix in itertools.product(points, repeat=p):
                for cycle in itertools.product(points, repeat=c):
                    found.add(_canonical(prefix, cycle))
    return tuple(sorted(found, key=lambda s: (len(s.prefix) + len(s.cycle), len(s.prefix), s.prefix, s.cycle)))


def selector_catalog(max_modulus: int = 4, max_threshold: int = 4) -> tuple[EpSet, ...]:
    found = set()
    for m in range(1, max_modulus + 1):
        for rmask in range(1, 1 << m):
            residues = [r for r in range(m) if rmask >> r & 1]
            for n in range(max_threshold + 1):
                for pmask in range(1 << n):
                    found.add(EpSet.make(n, m, residues, [k + 1 for k in range(n) if pmask >> k & 1]))
    return tuple(sorted(found, key=lambda e: (e.threshold, e.modulus, sorted(e.residues), sorted(e.prefix))))


def insertion_catalog(points: Sequence[str], max_terms: int = 2, max_position: int = 3) -> tuple[Insertion, ...]:
    singles = [(pos, x) for pos in range(1, max_position + 1) for x in points]
    out = []
    for k in range(1, max_terms + 1):
        out.extend(itertools.product(singles, repeat=k))
    return tuple(out)


@lru_cache(maxsize=32)
def default_catalog(points: tuple[str, ...], max_prefix: int = 3, max_cycle: int = 3) -> SeqCatalog:
    return SeqCatalog(
        tuple(points),
        sequence_universe(points, max_prefix, max_cycle),
        selector_catalog(),
        insertion_catalog(points),
    )


# --- sequence classes -----------------------------------------------------------

@dataclass(frozen=True)
class SeqClass:
    """A declared relation between sequences and their "I-limits", under one ideal."""

    points: tuple[str, ...]
    ideal: NatIdeal
    pairs: frozenset

    @staticmethod
    def make(points: Iterable[str], ideal: NatIdeal, pairs: Iterable[tuple[PeriodicSequence, str]]) -> "SeqClass":
        points = tuple(points)
        pairs = frozenset(pairs)
        known = set(points)
        for s, x in pairs:
            if x not in known:
                raise UnknownPoint(f"declared limit {x!r} is not a point of the space")
            bad = s.range - known
            if bad:
                raise UnknownPoint(f"sequence {s} uses unknown point {sorted(bad)[0]!r}")
        return SeqClass(points, ideal, pairs)

    @cached_property
    def index(self) -> dict[str, int]:
        return {p: i for i, p in enumerate(self.points)}

    @cached_property
    def limits(self) -> dict[PeriodicSequence, frozenset[str]]:
        out: dict[PeriodicSequence, set[str]] = defaultdict(set)
        for s, x in self.pairs:
            out[s].add(x)
        return {s: frozenset(xs) for s, xs in out.items()}

    def limits_of(self, s: PeriodicSequence) -> frozenset[str]:
        return self.limits.get(s, frozenset())

    def sorted_pairs(self) -> list[tuple[PeriodicSequence, str]]:
        return sorted(self.pairs, key=lambda p: (len(p[0].prefix) + len(p[0].cycle), p[0].prefix, p[0].cycle, p[1]))

    @cached_property
    def _range_limit_masks(self) -> tuple[tuple[int, int], ...]:
        out = set()
        for s, x in self.pairs:
            r = 0
            for p in s.range:
                r |= 1 << self.index[p]
            out.add((r, 1 << self.index[x]))
        return tuple(sorted(out))


def constant_pairs(points: Iterable[str]) -> set[tuple[PeriodicSequence, str]]:
    return {(PeriodicSequence.constant(x), x) for x in points}


def _fmt_pattern(pattern: Insertion) -> str:
    return " ".join(f"{x}@{p}" for p, x in pattern)


def check_C1(omega: SeqClass) -> Verdict:
    v = Verdict("C(1) constant sequences")
    for x in omega.points:
        s = PeriodicSequence.constant(x)
        v.record(x in omega.limits_of(s), {"sequence": str(s), "missing_limit": x})
    return v


def check_C2(omega: SeqClass, catalog: SeqCatalog | None = None) -> Verdict:
    """Finite insertions neither add nor remove declared limits (over the catalog)."""
    catalog = catalog or default_catalog(omega.points)
    v = Verdict("C(2) finite insertions")
    for s, pattern, t in catalog.insertion_edges:
        before, after = omega.limits_of(s), omega.limits_of(t)
        v.record(
            before == after,
            {
                "sequence": str(s),
                "insert": _fmt_pattern(pattern),
                "result": str(t),
                "limits_before": sorted(before),
                "limits_after": sorted(after),
            },
        )
    return v.bounded()


def check_C3(omega: SeqClass, catalog: SeqCatalog | None = None) -> Verdict:
    """Subsequences keep every declared limit (over the catalog)."""
    catalog = catalog or default_catalog(omega.points)
    v = Verdict("C(3) subsequences")
    for s, sel, t in catalog.subsequence_edges:
        missing = omega.limits_of(s) - omega.limits_of(t)
        v.record(
            not missing,
            {"sequence": str(s), "selector": str(sel), "result": str(t), "missing_limits": sorted(missing)},
        )
    return v.bounded()


def close_seq_class(omega: SeqClass, catalog: SeqCatalog | None = None, insertions: bool = True, subsequences: bool = True) -> SeqClass:
    """Smallest superclass satisfying C(1), and C(2)/C(3) over the catalog."""
    catalog = catalog or default_catalog(omega.points)
    both: dict[PeriodicSequence, list[PeriodicSequence]] = defaultdict(list)
    if insertions:
        for s, _, t in catalog.insertion_edges:
            both[s].append(t)
            both[t].append(s)
    if subsequences:
        for s, _, t in catalog.subsequence_edges:
            both[s].append(t)
    pairs = set(omega.pairs) | constant_pairs(omega.points)
    queue = deque(pairs)
    while queue:
        s, x = queue.popleft()
        for t in both.get(s, ()):
            if (t, x) not in pairs:
                pairs.add((t, x))
                queue.append((t, x))
    return SeqClass(omega.points, omega.ideal, frozenset(pairs))


# --- generated topology -------------------------------------------------------------

def open_wrt_class(subset: int, omega: SeqClass) -> bool:
    """No sequence lying outside `subset` has a declared limit inside it."""
    for r, x in omega._range_limit_masks:
        if r & subset == 0 and x & subset:
            return False
    return True


@dataclass
class SeqTopologyReport:
    points: tuple[str, ...]
    family: tuple[int, ...]
    topology: FiniteTopology | None
    violations: list[str]
    axioms: list[Verdict] = field(default_factory=list)
    omega_in_gamma: Verdict | None = None

    @property
    def axioms_hold(self) -> bool:
        return all(v.ok for v in self.axioms)

    @property
    def counterexample(self) -> bool:
        """The class passed its (bounded) axioms but the family is not a topology."""
        return self.axioms_hold and self.topology is None

    def family_verdict(self) -> Verdict:
        v = Verdict("generated family is a topology")
        v.record(self.topology is not None, {"violations": self.violations[:5]} if self.violations else None)
        return v


def generated_family(omega: SeqClass) -> tuple[int, ...]:
    n = len(omega.points)
    if n > MAX_GENERATED_POINTS:
        raise SpaceTooLarge(f"subset scan capped at {MAX_GENERATED_POINTS} points")
    return tuple(g for g in range(1 << n) if open_wrt_class(g, omega))


def generate_sequence_topology(omega: SeqClass, catalog: SeqCatalog | None = None, check_axioms: bool = True) -> SeqTopologyReport:
    family = generated_family(omega)
    try:
        topology = validate_topology(omega.points, family)
        violations: list[str] = []
    except AxiomViolation as e:
        topology, violations = None, e.violations
    report = SeqTopologyReport(omega.points, family, topology, violations)
    if check_axioms:
        catalog = catalog or default_catalog(omega.points)
        report.axioms = [check_C1(omega), check_C2(omega, catalog), check_C3(omega, catalog)]
    if topology is not None:
        report.omega_in_gamma = _pairs_converge(omega, topology, "Ω ⊂ Γ")
    return report


def _pairs_converge(omega: SeqClass, topology: FiniteTopology, name: str) -> Verdict:
    v = Verdict(name)
    for s, x in omega.sorted_pairs():
        v.record(seq_i_converges(s, topology, omega.ideal, x), {"sequence": str(s), "limit": x, "topology": str(topology)})
    return v


def gamma_of(topology: FiniteTopology, ideal: NatIdeal, universe: SeqCatalog | Iterable[PeriodicSequence] | None = None) -> SeqClass:
    """Every (sequence, I-limit) pair of the topology over a finite sequence universe."""
    if universe is None:
        universe = default_catalog(topology.points)
    seqs = universe.universe if isinstance(universe, SeqCatalog) else tuple(universe)
    pairs = set()
    for s in seqs:
        for x in seq_i_limits(s, topology, ideal):
            pairs.add((s, x))
    return SeqClass(topology.points, ideal, frozenset(pairs))


def check_class_in_generated(omega: SeqClass, catalog: SeqCatalog | None = None) -> Verdict:
    """Every declared pair converges in the topology the class generates."""
    report = generate_sequence_topology(omega, catalog, check_axioms=False)
    if report.topology is None:
        v = Verdict("Ω ⊂ Γ")
        v.record(False, {"violations": report.violations[:5]})
        return v
    return report.omega_in_gamma


def check_topology_recovered(topology: FiniteTopology, ideal: NatIdeal, catalog: SeqCatalog | None = None) -> tuple[Verdict, FiniteTopology | None]:
    """tau is contained in the topology generated by its own convergent sequences."""
    catalog = catalog or default_catalog(topology.points)
    gamma = gamma_of(topology, ideal, catalog)
    report = generate_sequence_topology(gamma, catalog, check_axioms=False)
    v = Verdict("τ ⊂ τ′").bounded()
    if report.topology is None:
        v.record(False, {"topology": str(topology), "violations": report.violations[:5]})
        return v, None
    finer = report.topology
    for u in topology.opens:
        v.record(finer.is_open(u), {"topology": str(topology), "open": topology.render(u), "tau_prime": str(finer)})
    return v, finer


def check_open_closed_limit_laws(topology: FiniteTopology, ideal: NatIdeal, catalog: SeqCatalog | None = None) -> Verdict:
    """No sequence outside an open set limits into it; closed sets keep their limits."""
    catalog = catalog or default_catalog(topology.points)
    open_law = Verdict("open sets: no exterior sequence has an I-limit inside")
    closed_law = Verdict("closed sets: I-limits of interior sequences stay inside")
    limits = {s: seq_i_limits(s, topology, ideal) for s in catalog.universe}
    for s in catalog.universe:
        r = topology.mask(s.range)
        lim = topology.mask(limits[s])
        for u in topology.opens:
            if r & u == 0:
                open_law.record(lim & u == 0, {"open": topology.render(u), "sequence": str(s), "limits": topology.render(lim & u)})
        for c in topology.closed:
            if r & ~c == 0:
                closed_law.record(lim & ~c == 0, {"closed": topology.render(c), "sequence": str(s), "limits": topology.render(lim & ~c)})
    v = Verdict(f"open/closed limit laws ({ideal})")
    v.add(open_law.bounded())
    v.add(closed_law.bounded())
    return v


def check_fin_ordinary(topology: FiniteTopology, catalog: SeqCatalog | None = None, ideals: Sequence[NatIdeal] = ()) -> Verdict:
    """Fin-convergence is ordinary convergence; admissible ideals weaken it."""
    catalog = catalog or default_catalog(topology.points)
    fin = NatIdeal.fin()
    ideals = tuple(ideals) or (NatIdeal.residue(2, {0}),)
    same = Verdict("Fin-convergence ≡ ordinary convergence")
    weaker = Verdict("ordinary convergence ⇒ I-convergence")
    for s in catalog.universe:
        for x in topology.points:
            ordinary = ordinary_converges(s, topology, x)
            same.record(ordinary == seq_i_converges(s, topology, fin, x), {"sequence": str(s), "point": x})
            for ideal in ideals:
                if ordinary:
                    weaker.record(seq_i_converges(s, topology, ideal, x), {"sequence": str(s), "point": x, "ideal": str(ideal)})
    v = Verdict("Fin-convergence is ordinary convergence")
    v.add(same.bounded())
    v.add(weaker.bounded())
    return v


def strictly_weaker_witness(topology: FiniteTopology, ideal: NatIdeal, catalog: SeqCatalog | None = None):
    """A sequence that I-converges without converging in the ordinary sense, if the catalog has one."""
    catalog = catalog or default_catalog(topology.points)
    for s in catalog.universe:
        for x in topology.points:
            if seq_i_converges(s, topology, ideal, x) and not ordinary_converges(s, topology, x):
                return s, x
    return None

