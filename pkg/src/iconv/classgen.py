"""Convergence classes of nets, the closure operator they induce, and its topology.

A class is a set of triples (net, ideal, limit). Every ideal on a finite index
set is the powerset of its largest member, so a triple stores that member as
the mask ``top``. Classes are either explicit (a stored set of triples) or
topological (membership means I-convergence in a fixed topology, enumerated
over the catalog universe when a list is needed).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .bits import bit_indices, full, is_subset, superset_or
from .directed import DirectedSet, chain, order_ideal_I0, shape
from .errors import InputError, NotAClosureOperator, PreconditionsNotMet, SpaceTooLarge, UnknownPoint
from .ideals import FiniteIdeal, enumerate_ideals, principal_ideal
from .netconv import (
    MAX_ITERATED_PRODUCT,
    IteratedFamily,
    Net,
    ProductIdeal,
    SubnetWitness,
    _outside,
    build_iterated_product,
    subnet_law_failure,
)
from .topology import FiniteTopology, closure_in, validate_topology
from .verdict import Verdict

MAX_CLOSURE_POINTS = 12
DEFAULT_SHAPES = ("chain2", "chain3", "vee3")


# --- triples -------------------------------------------------------------------

@dataclass(frozen=True)
class Triple:
    net: Net
    top: int  # the ideal is every subset of this mask
    limit: str

    @property
    def dir(self) -> DirectedSet:
        return self.net.dir

    @property
    def nontrivial(self) -> bool:
        return ideal_nontrivial(self.top, len(self.net.dir))

    @property
    def admissible(self) -> bool:
        return is_admissible_top(self.net.dir, self.top)

    def ideal(self) -> FiniteIdeal:
        return principal_ideal(self.net.dir.elements, self.top)

    def range_mask(self, index: dict[str, int]) -> int:
        out = 0
        for v in self.net.values:
            out |= 1 << index[v]
        return out

    def sort_key(self) -> tuple:
        return (len(self.net.dir), str(self.net.dir), self.net.values, self.top, self.limit)

    def __str__(self) -> str:
        d = self.net.dir
        return f"{d} values {self.net} ideal P{d.render(self.top)} -> {self.limit}"


def ideal_nontrivial(top: int, size: int) -> bool:
    return top != 0 and top != full(size)


def is_admissible_top(directed: DirectedSet, top: int) -> bool:
    """P(top) is D-admissible: nontrivial and contains every residual's complement."""
    return ideal_nontrivial(top, len(directed)) and is_subset(directed.full & ~directed.top, top)


def admissible_tops(directed: DirectedSet) -> list[int]:
    return [a for a in range(1, directed.full) if is_admissible_top(directed, a)]


def triple_converges(t: Triple, topology: FiniteTopology) -> bool:
    i = topology.index[t.limit]
    for u, bad in _outside(t.net, topology).items():
        if u >> i & 1 and bad & ~t.top:
            return False
    return True


def sorted_triples(triples: Iterable[Triple]) -> list[Triple]:
    return sorted(triples, key=Triple.sort_key)


# --- catalog -----------------------------------------------------------------------

def order_embeddings(source: DirectedSet, target: DirectedSet, general: bool = False) -> Iterator[tuple[int, ...]]:
    """Maps source -> target satisfying the subnet law.

    By default only injective maps that preserve and reflect the order;
    ``general`` admits every map satisfying the subnet law.
    """
    ns, nt = len(source), len(target)
    for theta in itertools.product(range(nt), repeat=ns):
        if not general:
            if len(set(theta)) != ns:
                continue
            if any(
                bool(source.up[q] >> p & 1) != bool(target.up[theta[q]] >> theta[p] & 1)
                for p in range(ns)
                for q in range(ns)
            ):
                continue
        if subnet_law_failure(target, SubnetWitness(source, theta)) is None:
            yield theta


@dataclass(frozen=True)
class ClassCatalog:
    """Finite stand-ins for "all directed sets" and "all subnets".

    Shapes carry the designated ideal I_0 for condition (a); patterns map a
    source directed set into a target one and drive (b), (c) and (J).
    """

    shapes: tuple[tuple[str, DirectedSet], ...]
    patterns: tuple[tuple[DirectedSet, SubnetWitness], ...]
    general: bool = False

    @cached_property
    def by_target(self) -> dict[DirectedSet, tuple[SubnetWitness, ...]]:
        out: dict[DirectedSet, list[SubnetWitness]] = {}
        for target, w in self.patterns:
            out.setdefault(target, []).append(w)
        return {k: tuple(v) for k, v in out.items()}

    def patterns_from(self, directed: DirectedSet) -> tuple[SubnetWitness, ...]:
        return self.by_target.get(directed, ())

    @cached_property
    def shape_set(self) -> frozenset[DirectedSet]:
        return frozenset(d for _, d in self.shapes)

    def shape_name(self, directed: DirectedSet) -> str | None:
        for name, d in self.shapes:
            if d == directed:
                return name
        return None

    def universe(self, points: Sequence[str]) -> list[Triple]:
        """Nets on the shapes, each with every D-admissible ideal and every limit."""
        out = []
        for _, d in self.shapes:
            tops = admissible_tops(d)
            for values in itertools.product(tuple(points), repeat=len(d)):
                net = Net(d, values)
                for top in tops:
                    for x in points:
                        out.append(Triple(net, top, x))
        return out


def make_catalog(shape_names: Sequence[str] = DEFAULT_SHAPES, general: bool = False) -> ClassCatalog:
    shapes = tuple((name, shape(name)) for name in shape_names)
    sources = [chain(1)] + [d for _, d in shapes]
    targets = [chain(1)] + [d for _, d in shapes]
    patterns = []
    for target in targets:
        for source in sources:
            if len(source) > len(target) and not general:
                continue
            for theta in order_embeddings(source, target, general):
                patterns.append((target, SubnetWitness(source, theta)))
    return ClassCatalog(shapes, tuple(patterns), general)


_DEFAULT_CATALOGS: dict[tuple, ClassCatalog] = {}


def default_class_catalog(general: bool = False) -> ClassCatalog:
    key = (DEFAULT_SHAPES, general)
    if key not in _DEFAULT_CATALOGS:
        _DEFAULT_CATALOGS[key] = make_catalog(DEFAULT_SHAPES, general)
    return _DEFAULT_CATALOGS[key]


# --- classes -----------------------------------------------------------------------

@dataclass(frozen=True)
class NetClass:
    points: tuple[str, ...]
    catalog: ClassCatalog
    explicit: frozenset = frozenset()
    topology: FiniteTopology | None = None
    # condition (a) in full: every constant net, on any index set and under any
    # nontrivial ideal, converges to its value
    constants: bool = False

    @staticmethod
    def make(points: Iterable[str], triples: Iterable[Triple], catalog: ClassCatalog | None = None, constants: bool = False) -> "NetClass":
        points = tuple(points)
        known = set(points)
        triples = frozenset(triples)
        for t in triples:
            if t.limit not in known:
                raise UnknownPoint(f"limit {t.limit!r} is not a point of the space")
            bad = set(t.net.values) - known
            if bad:
                raise UnknownPoint(f"net value {sorted(bad)[0]!r} is not a point of the space")
            if not t.nontrivial:
                raise InputError(f"triple {t} carries a trivial ideal")
        catalog = catalog or default_class_catalog()
        if constants:
            triples = triples | constant_triples(points, catalog)
        return NetClass(points, catalog, triples, constants=constants)

    @staticmethod
    def topological(topology: FiniteTopology, catalog: ClassCatalog | None = None) -> "NetClass":
        return NetClass(topology.points, catalog or default_class_catalog(), frozenset(), topology)

    @property
    def is_topological(self) -> bool:
        return self.topology is not None

    @cached_property
    def index(self) -> dict[str, int]:
        return {p: i for i, p in enumerate(self.points)}

    def contains(self, t: Triple) -> bool:
        if self.topology is not None:
            return t.nontrivial and triple_converges(t, self.topology)
        if self.constants and t.nontrivial and all(v == t.limit for v in t.net.values):
            return True
        return t in self.explicit

    @cached_property
    def triples(self) -> tuple[Triple, ...]:
        if self.topology is not None:
            found = [t for t in self.catalog.universe(self.points) if triple_converges(t, self.topology)]
        else:
            found = list(self.explicit)
        return tuple(sorted_triples(found))

    def with_triples(self, triples: Iterable[Triple], constants: bool | None = None) -> "NetClass":
        flag = self.constants if constants is None else constants
        return NetClass(self.points, self.catalog, frozenset(triples), constants=flag)


def constant_triples(points: Sequence[str], catalog: ClassCatalog) -> set[Triple]:
    out = set()
    for _, d in catalog.shapes:
        top = order_ideal_I0(d).top
        for x in points:
            out.add(Triple(Net.constant(d, x), top, x))
    return out


def subnet_triple(t: Triple, w: SubnetWitness) -> Triple:
    """The subnet with its induced ideal P({p : theta_p in top})."""
    top = sum(1 << p for p, q in enumerate(w.theta) if t.top >> q & 1)
    return Triple(Net(w.sub, tuple(t.net.values[q] for q in w.theta)), top, t.limit)


def tail_proxies(value: str, limit: str, catalog: ClassCatalog) -> list[Triple]:
    """Constant nets standing in for a one-point cofinal subnet.

    A one-point index set carries no nontrivial ideal, so such a subnet cannot
    be a member itself.  It records that the net is eventually ``value``; the
    constant ``value`` nets on the catalog shapes carry that information.
    """
    return [Triple(Net.constant(d, value), order_ideal_I0(d).top, limit) for _, d in catalog.shapes]


def subnet_images(t: Triple, catalog: ClassCatalog) -> Iterator[tuple[SubnetWitness, Triple]]:
    """Triples that condition (b) requires once ``t`` is a member.

    A subnet with a nontrivial induced ideal is required as it is.  When the
    induced ideal is {∅} every value of the subnet lies outside the bad sets,
    so the subnet converges under the order ideal of its index set, or, on a
    single point, through its tail proxies.
    """
    for w in catalog.patterns_from(t.dir):
        s = subnet_triple(t, w)
        if s.nontrivial:
            yield w, s
        elif s.top == 0:
            i0 = order_ideal_I0(w.sub)
            if i0.nontrivial:
                yield w, Triple(s.net, i0.top, t.limit)
            else:
                for p in tail_proxies(s.net.values[-1], t.limit, catalog):
                    yield w, p


# --- conditions (a)-(d) and (J) -----------------------------------------------------------

def check_condition_a(cls: NetClass) -> Verdict:
    v = Verdict("(a) constant nets")
    for t in sorted_triples(constant_triples(cls.points, cls.catalog)):
        v.record(cls.contains(t), {"shape": cls.catalog.shape_name(t.dir), "point": t.limit})
    return v


def _subnet_images(cls: NetClass) -> Iterator[tuple[Triple, SubnetWitness, Triple]]:
    for t in cls.triples:
        for w, s in subnet_images(t, cls.catalog):
            yield t, w, s


def check_condition_b(cls: NetClass) -> Verdict:
    """Catalog subnets with a nontrivial induced ideal stay in the class."""
    v = Verdict("(b) subnets")
    for t, w, s in _subnet_images(cls):
        v.record(cls.contains(s), {"triple": str(t), "subnet": str(w), "missing": str(s)})
    return v.bounded()


def _some_image_converges(cls: NetClass, net: Net, x: str) -> bool:
    """Some catalog subnet of ``net`` is a member with limit x under a nontrivial ideal."""
    for w in cls.catalog.patterns_from(net.dir):
        sub = Net(w.sub, tuple(net.values[q] for q in w.theta))
        if len(w.sub) == 1:
            if any(cls.contains(p) for p in tail_proxies(sub.values[0], x, cls.catalog)):
                return True
            continue
        if any(cls.contains(Triple(sub, ideal.top, x)) for ideal in enumerate_ideals(w.sub.elements)):
            return True
    return False


def check_condition_c(cls: NetClass) -> Verdict:
    """Each non-member of the universe has a subnet none of whose subnets is a member."""
    v = Verdict("(c) non-members have a separating subnet")
    for t in cls.catalog.universe(cls.points):
        if cls.contains(t):
            continue
        found = any(
            not _some_image_converges(cls, Net(w.sub, tuple(t.net.values[q] for q in w.theta)), t.limit)
            for w in cls.catalog.patterns_from(t.dir)
        )
        v.record(found, {"non_member": str(t)})
    return v.bounded()


def _compose(outer: Triple, rows: Sequence[Triple]) -> tuple[IteratedFamily, Triple] | None:
    d = outer.dir
    size = len(d)
    for r in rows:
        size *= len(r.dir)
    if size > MAX_ITERATED_PRODUCT:
        return None
    fam = IteratedFamily(
        d,
        tuple(r.dir for r in rows),
        tuple(r.net.values for r in rows),
        outer.ideal(),
        tuple(r.ideal() for r in rows),
    )
    product = build_iterated_product(fam)
    member = ProductIdeal(product).contains
    top = sum(1 << x for x in range(len(product.dir)) if member(1 << x))
    return fam, Triple(product.net, top, outer.limit)


def iterated_compositions(cls: NetClass, per_outer: int = 2, seed: int = 0) -> Iterator[tuple[Triple, tuple[Triple, ...], Triple]]:
    """Seeded sample of (outer, rows, composed) built from class members on catalog shapes."""
    rng = random.Random(seed)
    on_shapes = [t for t in cls.triples if t.dir in cls.catalog.shape_set]
    by_limit: dict[str, list[Triple]] = {}
    for t in on_shapes:
        by_limit.setdefault(t.limit, []).append(t)
    for outer in on_shapes:
        pools = [by_limit.get(v, []) for v in outer.net.values]
        if not all(pools):
            continue
        for _ in range(per_outer):
            rows = tuple(rng.choice(p) for p in pools)
            built = _compose(outer, rows)
            if built is not None:
                yield outer, rows, built[1]


def check_condition_d(cls: NetClass, per_outer: int = 2, seed: int = 0) -> Verdict:
    v = Verdict("(d) iterated limits")
    for outer, rows, composed in iterated_compositions(cls, per_outer, seed):
        v.record(
            cls.contains(composed),
            {"outer": str(outer), "rows": [str(r) for r in rows], "limit": composed.limit},
        )
    return v.bounded()


def check_condition_J(cls: NetClass) -> Verdict:
    """Induced ideals of D-admissible triples are E-admissible (when nontrivial)."""
    v = Verdict("(J) induced ideals are admissible")
    for t in cls.triples:
        if not t.admissible:
            continue
        for w in cls.catalog.patterns_from(t.dir):
            s = subnet_triple(t, w)
            if s.nontrivial:
                v.record(s.admissible, {"triple": str(t), "subnet": str(w), "induced": f"P{w.sub.render(s.top)}"})
    return v.bounded()


def close_class(cls: NetClass, conditions: str = "abd", per_outer: int = 2, seed: int = 0) -> NetClass:
    """Smallest explicit superclass closed under the chosen conditions at catalog scale.

    (a) and (b) are closed to a fixpoint; (d) adds one seeded round of
    compositions, whose product-indexed nets are not composed again.
    """
    triples = set(cls.triples)
    constants = cls.constants or "a" in conditions
    if constants:
        triples |= constant_triples(cls.points, cls.catalog)
    if "b" in conditions:
        queue = list(triples)
        while queue:
            t = queue.pop()
            for _, s in subnet_images(t, cls.catalog):
                if s not in triples:
                    triples.add(s)
                    queue.append(s)
    out = cls.with_triples(triples, constants)
    if "d" in conditions:
        composed = {c for _, _, c in iterated_compositions(out, per_outer, seed)}
        out = out.with_triples(triples | composed)
    return out


# --- closure operator ---------------------------------------------------------------------

@dataclass(frozen=True)
class ClosureOp:
    points: tuple[str, ...]
    table: tuple[int, ...]

    def __call__(self, mask: int) -> int:
        return self.table[mask]

    def render(self, mask: int) -> str:
        return "{" + " ".join(self.points[i] for i in bit_indices(mask)) + "}"


def closure_from_class(cls: NetClass) -> ClosureOp:
    """A^cl = points that are limits of some member net lying in A."""
    n = len(cls.points)
    if n > MAX_CLOSURE_POINTS:
        raise SpaceTooLarge(f"closure table capped at {MAX_CLOSURE_POINTS} points")
    base = [0] * (1 << n)
    for t in cls.triples:
        base[t.range_mask(cls.index)] |= 1 << cls.index[t.limit]
    return ClosureOp(cls.points, tuple(superset_or(base, n)))


def topological_closure_op(topology: FiniteTopology) -> ClosureOp:
    return ClosureOp(topology.points, tuple(closure_in(topology, a) for a in range(1 << topology.size)))


def kuratowski_check(cl: ClosureOp) -> Verdict:
    n = len(cl.points)
    everything = full(n)
    empty = Verdict("empty set is closed")
    empty.record(cl(0) == 0, {"closure_of_empty": cl.render(cl(0))})
    extensive = Verdict("A ⊂ cl A")
    additive = Verdict("cl(A ∪ B) = cl A ∪ cl B")
    idempotent = Verdict("cl cl A = cl A")
    monotone = Verdict("A ⊂ B ⇒ cl A ⊂ cl B")
    for a in range(everything + 1):
        ca = cl(a)
        extensive.record(is_subset(a, ca), {"A": cl.render(a), "cl": cl.render(ca)})
        idempotent.record(cl(ca) == ca, {"A": cl.render(a), "cl": cl.render(ca), "cl_cl": cl.render(cl(ca))})
        # pairs (A, {x}) suffice: the general case follows by induction on |B|
        for x in range(n):
            b = 1 << x
            if not a & b:
                joined = cl(a | b)
                additive.record(
                    joined == ca | cl(b),
                    {"A": cl.render(a), "B": cl.render(b), "cl_union": cl.render(joined), "union_cl": cl.render(ca | cl(b))},
                )
                monotone.record(is_subset(ca, joined), {"A": cl.render(a), "B": cl.render(a | b)})
    v = Verdict("Kuratowski axioms")
    for part in (empty, extensive, additive, idempotent, monotone):
        v.add(part)
    return v


def iterate_closure(cl: ClosureOp) -> tuple[ClosureOp, int]:
    """Apply cl until every entry is stable; returns the operator and the rounds needed."""
    table = list(cl.table)
    rounds = 0
    while True:
        nxt = [cl.table[t] | t for t in table]
        if nxt == table:
            return ClosureOp(cl.points, tuple(table)), rounds
        table = nxt
        rounds += 1


def topology_from_closure(cl: ClosureOp) -> FiniteTopology:
    verdict = kuratowski_check(cl)
    if not verdict.ok:
        failed = [p.check for p in verdict.parts if not p.ok]
        raise NotAClosureOperator("closure fails: " + ", ".join(failed))
    everything = full(len(cl.points))
    closed = [a for a in range(everything + 1) if cl(a) == a]
    return validate_topology(cl.points, [everything ^ c for c in closed])


def check_class_soundness(cls: NetClass, topology: FiniteTopology | None = None) -> Verdict:
    """Every member converges in the topology of its closure operator."""
    v = Verdict("members converge in the generated topology")
    if topology is None:
        try:
            topology = topology_from_closure(closure_from_class(cls))
        except NotAClosureOperator as e:
            v.record(False, {"reason": str(e)})
            return v
    for t in cls.triples:
        v.record(triple_converges(t, topology), {"triple": str(t), "topology": str(topology)})
    return v


def check_class_completeness(cls: NetClass, topology: FiniteTopology | None = None, preconditions: Sequence[Verdict] | None = None) -> Verdict:
    """Universe triples converging in the generated topology are members."""
    if preconditions is None:
        preconditions = [check_condition_a(cls), check_condition_b(cls), check_condition_c(cls), check_condition_d(cls), check_condition_J(cls)]
    failed = [p.check for p in preconditions if not p.ok]
    if failed:
        raise PreconditionsNotMet("failing: " + ", ".join(failed))
    if topology is None:
        topology = topology_from_closure(closure_from_class(cls))
    v = Verdict("convergent universe triples are members")
    for t in cls.catalog.universe(cls.points):
        if triple_converges(t, topology):
            v.record(cls.contains(t), {"triple": str(t), "topology": str(topology)})
    return v.bounded()


@dataclass
class ClassReport:
    conditions: list[Verdict] = field(default_factory=list)
    kuratowski: Verdict | None = None
    topology: FiniteTopology | None = None
    soundness: Verdict | None = None
    completeness: Verdict | None = None
    note: str = ""

    def verdicts(self) -> list[Verdict]:
        out = list(self.conditions)
        for v in (self.kuratowski, self.soundness, self.completeness):
            if v is not None:
                out.append(v)
        return out


def analyse_class(cls: NetClass, seed: int = 0) -> ClassReport:
    report = ClassReport()
    report.conditions = [
        check_condition_a(cls),
        check_condition_b(cls),
        check_condition_c(cls),
        check_condition_d(cls, seed=seed),
        check_condition_J(cls),
    ]
    cl = closure_from_class(cls)
    report.kuratowski = kuratowski_check(cl)
    if not report.kuratowski.ok:
        report.note = "closure operator fails; no generated topology"
        return report
    report.topology = topology_from_closure(cl)
    report.soundness = check_class_soundness(cls, report.topology)
    try:
        report.completeness = check_class_completeness(cls, report.topology, report.conditions)
    except PreconditionsNotMet as e:
        report.note = f"completeness not checked: {e}"
    return report
