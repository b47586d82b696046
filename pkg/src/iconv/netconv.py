"""Ideal convergence of nets on finite directed sets.

Covers limits and cluster points, subnets with their induced ideals, the
non-convergence witness subnet, and iterated limits over product directed sets
together with the composite ideal on the product.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Sequence

from .bits import bit_indices, full, is_subset, submasks
from .directed import DirectedSet, d_admissible_ideals, is_d_admissible, label, order_ideal_I0, product_directed
from .errors import (
    ActuallyConvergent,
    DegenerateI0,
    DegenerateInducedIdeal,
    GroundMismatch,
    InputError,
    NotSubnet,
    TooLarge,
    UnknownPoint,
)
from .ideals import FiniteIdeal, enumerate_ideals
from .topology import FiniteTopology, closure_in
from .verdict import Verdict

MAX_ITERATED_PRODUCT = 128
MAX_SPLIT_ORACLE = 12

Membership = Callable[[int], bool]


@dataclass(frozen=True)
class Net:
    dir: DirectedSet
    values: tuple[str, ...]

    @staticmethod
    def make(directed: DirectedSet, values: Sequence[str]) -> "Net":
        values = tuple(values)
        if len(values) != len(directed):
            raise InputError(f"net has {len(values)} values for {len(directed)} indices")
        return Net(directed, values)

    @staticmethod
    def constant(directed: DirectedSet, point: str) -> "Net":
        return Net(directed, (point,) * len(directed))

    @cached_property
    def range(self) -> frozenset[str]:
        return frozenset(self.values)

    def __str__(self) -> str:
        return "[" + " ".join(self.values) + "]"


def _membership(ideal) -> Membership:
    return ideal.contains if hasattr(ideal, "contains") else ideal


def _check(net: Net, ideal, topology: FiniteTopology) -> None:
    if isinstance(ideal, FiniteIdeal) and tuple(ideal.ground) != net.dir.elements:
        raise GroundMismatch("ideal ground differs from the net's index set")
    for p in net.range:
        if p not in topology.index:
            raise UnknownPoint(f"net value {p!r} is not a point of the space")


@lru_cache(maxsize=1 << 16)
def _point_masks(net: Net, topology: FiniteTopology) -> tuple[int, ...]:
    """For each point, the mask of indices where the net takes that value."""
    out = [0] * topology.size
    for n, v in enumerate(net.values):
        out[topology.index[v]] |= 1 << n
    return tuple(out)


@lru_cache(maxsize=1 << 16)
def _outside(net: Net, topology: FiniteTopology) -> dict[int, int]:
    """open U -> {n : S_n not in U}."""
    pm = _point_masks(net, topology)
    out = {}
    for u in topology.opens:
        bad = 0
        for i, m in enumerate(pm):
            if not u >> i & 1:
                bad |= m
        out[u] = bad
    return out


def _converges(net: Net, topology: FiniteTopology, member: Membership, i: int) -> bool:
    for u, bad in _outside(net, topology).items():
        if u >> i & 1 and not member(bad):
            return False
    return True


def net_i_converges(net: Net, ideal, topology: FiniteTopology, x0: str) -> bool:
    """For every open U containing x0, {n : S_n not in U} belongs to the ideal.

    `ideal` is a FiniteIdeal or any membership predicate on index masks.
    """
    _check(net, ideal, topology)
    if x0 not in topology.index:
        raise UnknownPoint(f"{x0!r} is not a point of the space")
    return _converges(net, topology, _membership(ideal), topology.index[x0])


def net_i_limits(net: Net, ideal, topology: FiniteTopology) -> frozenset[str]:
    _check(net, ideal, topology)
    member = _membership(ideal)
    return frozenset(x for i, x in enumerate(topology.points) if _converges(net, topology, member, i))


def net_i_cluster_points(net: Net, ideal, topology: FiniteTopology) -> frozenset[str]:
    _check(net, ideal, topology)
    member = _membership(ideal)
    everything = net.dir.full
    out = set()
    for i, x in enumerate(topology.points):
        if all(not member(everything ^ bad) for u, bad in _outside(net, topology).items() if u >> i & 1):
            out.add(x)
    return frozenset(out)


def classical_converges(net: Net, topology: FiniteTopology, x0: str) -> bool:
    """Some residual M_n is mapped into the smallest open set around x0."""
    nbhd = topology.neighbourhood[topology.index[x0]]
    pm = _point_masks(net, topology)
    inside = 0
    for i, m in enumerate(pm):
        if nbhd >> i & 1:
            inside |= m
    return any(is_subset(up, inside) for up in net.dir.up)


def closure_side(net: Net, ideal: FiniteIdeal, topology: FiniteTopology) -> frozenset[str]:
    """Intersection over T in F(I) of the closure of {S_t : t in T}."""
    _check(net, ideal, topology)
    pm = _point_masks(net, topology)
    everything = net.dir.full
    out = topology.full
    for member in ideal.members:
        t = everything ^ member
        a_t = sum(1 << i for i, m in enumerate(pm) if m & t)
        out &= closure_in(topology, a_t)
    return topology.subset(out)


def check_cluster_closure(net: Net, ideal: FiniteIdeal, topology: FiniteTopology) -> Verdict:
    """Cluster points coincide with the points in every closure of a filter-set image."""
    clusters = net_i_cluster_points(net, ideal, topology)
    closure = closure_side(net, ideal, topology)
    v = Verdict("cluster points = closure characterization")
    for x in topology.points:
        v.record(
            (x in clusters) == (x in closure),
            {"net": str(net), "point": x, "cluster": x in clusters, "closure_side": x in closure},
        )
    return v


# --- subnets ----------------------------------------------------------------

@dataclass(frozen=True)
class SubnetWitness:
    """A directed set E and a map theta from E to the parent's index set (by position)."""

    sub: DirectedSet
    theta: tuple[int, ...]

    def __str__(self) -> str:
        return f"E={self.sub} theta=({' '.join(map(str, self.theta))})"


def subnet_law_failure(parent: DirectedSet, w: SubnetWitness) -> int | None:
    """First parent index m with no tail of E mapped above m, or None."""
    if len(w.theta) != len(w.sub):
        raise InputError(f"theta has {len(w.theta)} entries for {len(w.sub)} subnet indices")
    if any(t < 0 or t >= len(parent) for t in w.theta):
        raise InputError("theta maps outside the parent index set")
    for m in range(len(parent)):
        above = sum(1 << p for p, t in enumerate(w.theta) if parent.up[m] >> t & 1)
        if not any(is_subset(w.sub.up[n], above) for n in range(len(w.sub))):
            return m
    return None


def validate_subnet(net: Net, w: SubnetWitness) -> Net:
    m = subnet_law_failure(net.dir, w)
    if m is not None:
        raise NotSubnet(label(net.dir.elements[m]))
    return Net(w.sub, tuple(net.values[t] for t in w.theta))


def image(w: SubnetWitness, mask: int) -> int:
    out = 0
    for p in bit_indices(mask):
        out |= 1 << w.theta[p]
    return out


@dataclass(frozen=True)
class InducedIdeal:
    ideal: FiniteIdeal
    nontrivial: bool


def induced_subnet_ideal(w: SubnetWitness, ideal_d: FiniteIdeal) -> InducedIdeal:
    """I_E = {A subset of E : theta(A) in I_D}.

    Nontrivial needs theta(E) outside I_D and also some nonempty A with
    theta(A) inside I_D.
    """
    members = frozenset(a for a in range(1 << len(w.sub)) if ideal_d.contains(image(w, a)))
    ideal = FiniteIdeal(w.sub.elements, members)
    return InducedIdeal(ideal, ideal.nontrivial)


def check_subnet_keeps_limits(net: Net, w: SubnetWitness, ideal_d: FiniteIdeal, topology: FiniteTopology) -> Verdict:
    """Every I_D-limit of the net is an I_E-limit of the subnet."""
    sub = validate_subnet(net, w)
    induced = induced_subnet_ideal(w, ideal_d)
    if not induced.nontrivial:
        raise DegenerateInducedIdeal(f"induced ideal {induced.ideal} is trivial")
    v = Verdict("subnet keeps every limit under the induced ideal")
    for x in sorted(net_i_limits(net, ideal_d, topology)):
        v.record(
            net_i_converges(sub, induced.ideal, topology, x),
            {"net": str(net), "subnet": str(w), "limit": x, "induced": str(induced.ideal)},
        )
    return v


def compose(outer: SubnetWitness, inner: SubnetWitness) -> SubnetWitness:
    """theta of a subnet-of-a-subnet: first inner (E2 -> E), then outer (E -> D)."""
    return SubnetWitness(inner.sub, tuple(outer.theta[t] for t in inner.theta))


@dataclass(frozen=True)
class NonConvergenceWitness:
    witness: SubnetWitness
    open: int
    subnet: Net


def witness_non_convergence(net: Net, ideal_d: FiniteIdeal, topology: FiniteTopology, x0: str) -> NonConvergenceWitness:
    """The cofinal subnet of indices that leave some open U around x0.

    The union of the sets B_n = {m >= n : S_m not in U} is just the bad set
    itself, taken with the inherited order and the inclusion map.
    """
    if not is_d_admissible(ideal_d, net.dir):
        raise InputError("witness construction needs a D-admissible ideal")
    i = topology.index.get(x0)
    if i is None:
        raise UnknownPoint(f"{x0!r} is not a point of the space")
    _check(net, ideal_d, topology)
    for u, bad in sorted(_outside(net, topology).items()):
        if u >> i & 1 and not ideal_d.contains(bad):
            w = SubnetWitness(net.dir.restrict(bad), tuple(bit_indices(bad)))
            sub = validate_subnet(net, w)
            assert all(not u >> topology.index[v] & 1 for v in sub.values)
            return NonConvergenceWitness(w, u, sub)
    raise ActuallyConvergent(f"the net I-converges to {x0}")


def check_witness_subnet(net: Net, ideal_d: FiniteIdeal, topology: FiniteTopology, x0: str) -> Verdict:
    """Replay the witness and confirm no nontrivial ideal on it yields convergence."""
    found = witness_non_convergence(net, ideal_d, topology, x0)
    v = Verdict("witness subnet avoids x0")
    outside = all(not found.open >> topology.index[p] & 1 for p in found.subnet.values)
    v.record(outside, {"net": str(net), "point": x0, "open": topology.render(found.open)})
    if len(found.witness.sub) <= 4:
        for ideal in enumerate_ideals(found.witness.sub.elements):
            v.record(
                not net_i_converges(found.subnet, ideal, topology, x0),
                {"net": str(net), "point": x0, "subnet": str(found.witness), "ideal": str(ideal)},
            )
    else:
        v.bounded()
    return v


# --- iterated limits ---------------------------------------------------------------

@dataclass(frozen=True)
class IteratedFamily:
    """Rows S(m, .) indexed by inner directed sets E_m, one per m in D."""

    dir: DirectedSet
    inner: tuple[DirectedSet, ...]
    table: tuple[tuple[str, ...], ...]
    ideal_d: FiniteIdeal
    inner_ideals: tuple[FiniteIdeal, ...]

    @staticmethod
    def make(directed, inner, table, ideal_d, inner_ideals) -> "IteratedFamily":
        fam = IteratedFamily(directed, tuple(inner), tuple(tuple(r) for r in table), ideal_d, tuple(inner_ideals))
        validate_family(fam)
        return fam

    def row(self, m: int) -> Net:
        return Net(self.inner[m], self.table[m])

    @property
    def size(self) -> int:
        out = len(self.dir)
        for e in self.inner:
            out *= len(e)
        return out

    def __str__(self) -> str:
        rows = "; ".join(" ".join(r) for r in self.table)
        return f"D={self.dir} rows=[{rows}]"


def validate_family(fam: IteratedFamily) -> None:
    k = len(fam.dir)
    if not (len(fam.inner) == len(fam.table) == len(fam.inner_ideals) == k):
        raise InputError("a family needs one inner directed set, row and ideal per outer index")
    if tuple(fam.ideal_d.ground) != fam.dir.elements:
        raise GroundMismatch("outer ideal ground differs from D")
    if not fam.ideal_d.nontrivial:
        raise InputError("outer ideal must be nontrivial")
    for m in range(k):
        if len(fam.table[m]) != len(fam.inner[m]):
            raise InputError(f"row {m + 1} has {len(fam.table[m])} values for {len(fam.inner[m])} indices")
        if tuple(fam.inner_ideals[m].ground) != fam.inner[m].elements:
            raise GroundMismatch(f"inner ideal {m + 1} ground differs from its directed set")
        if not fam.inner_ideals[m].nontrivial:
            raise InputError(f"inner ideal {m + 1} must be nontrivial")
    if fam.size > MAX_ITERATED_PRODUCT:
        raise TooLarge(f"product has {fam.size} elements, cap is {MAX_ITERATED_PRODUCT}")


@dataclass(frozen=True)
class IteratedProduct:
    family: IteratedFamily
    dir: DirectedSet
    net: Net
    proj: tuple[int, ...]  # outer index m of each element
    row_index: tuple[int, ...]  # f(m) of each element


def build_iterated_product(fam: IteratedFamily) -> IteratedProduct:
    """The product directed set D x (x E_m) and the net S o R with R(m, f) = (m, f(m))."""
    validate_family(fam)
    product = product_directed((fam.dir,) + fam.inner, limit=MAX_ITERATED_PRODUCT)
    combos = list(itertools.product(*(range(len(f)) for f in (fam.dir,) + fam.inner)))
    proj = tuple(c[0] for c in combos)
    row_index = tuple(c[1 + c[0]] for c in combos)
    values = tuple(fam.table[m][n] for m, n in zip(proj, row_index))
    return IteratedProduct(fam, product, Net(product, values), proj, row_index)


class ProductIdeal:
    """Membership in the composite ideal on the product, as a predicate on masks."""

    def __init__(self, product: IteratedProduct):
        self.product = product
        self.family = product.family

    def parts(self, h: int) -> tuple[int, list[int]]:
        """(projection of H onto D, [G_m : the E_m-coordinates used by H in row m])."""
        proj, rows = 0, [0] * len(self.family.dir)
        p, r = self.product.proj, self.product.row_index
        for x in bit_indices(h):
            proj |= 1 << p[x]
            rows[p[x]] |= 1 << r[x]
        return proj, rows

    def heavy_rows(self, h: int) -> tuple[int, int]:
        proj, rows = self.parts(h)
        m1 = 0
        for m, g in enumerate(rows):
            if g and not self.family.inner_ideals[m].contains(g):
                m1 |= 1 << m
        return proj, m1

    def contains(self, h: int) -> bool:
        """proj(H) in I_D, or (M1 in I_D and proj(H) - M1 not in I_D).

        M1 collects the rows whose coordinate sets escape their inner ideal.
        The rows outside M1 can always form the second part of a split, so the
        test reduces to whether M1 itself is small.
        """
        proj, m1 = self.heavy_rows(h)
        ideal_d = self.family.ideal_d
        return ideal_d.contains(proj) or (ideal_d.contains(m1) and not ideal_d.contains(proj & ~m1))

    __call__ = contains


@lru_cache(maxsize=64)
def _split_tables(product: IteratedProduct) -> tuple[list[bool], list[bool]]:
    """Per subset S of the product: can S be a first part, can S be a (nonempty) second part."""
    fam = product.family
    n = len(product.dir)
    ideal = ProductIdeal(product)
    first, second = [False] * (1 << n), [False] * (1 << n)
    for s in range(1 << n):
        proj, rows = ideal.parts(s)
        first[s] = fam.ideal_d.contains(proj)
        second[s] = (
            s != 0
            and not fam.ideal_d.contains(proj)
            and all(fam.inner_ideals[m].contains(rows[m]) for m in bit_indices(proj))
        )
    return first, second


def if_member_split(product: IteratedProduct, h: int) -> bool:
    """Literal definition: some split H = H1 u H2 with the first/second part conditions.

    The first-part condition is inherited by subsets, so H1 = H - H2 loses nothing.
    """
    if len(product.dir) > MAX_SPLIT_ORACLE:
        raise TooLarge(f"split oracle is capped at {MAX_SPLIT_ORACLE} product elements")
    return _split_member(*_split_tables(product), h)


def _split_member(first: list[bool], second: list[bool], h: int) -> bool:
    if first[h]:
        return True
    for h2 in submasks(h):
        if second[h2] and first[h ^ h2]:
            return True
    return False


def check_if_criterion(product: IteratedProduct) -> Verdict:
    """Fast membership test agrees with the split definition on every subset."""
    ideal = ProductIdeal(product)
    if len(product.dir) > MAX_SPLIT_ORACLE:
        raise TooLarge(f"split oracle is capped at {MAX_SPLIT_ORACLE} product elements")
    first, second = _split_tables(product)
    v = Verdict("product ideal: fast criterion = split definition")
    for h in range(1 << len(product.dir)):
        fast, literal = ideal.contains(h), _split_member(first, second, h)
        v.record(fast == literal, {"family": str(product.family), "H": product.dir.render(h), "fast": fast, "split": literal})
    return v


def if_ideal_axioms(product: IteratedProduct, member: Membership | None = None, sample: int = 2000, seed: int = 0) -> Verdict:
    """Empty set in, whole product out, downward closed, union closed.

    Exhaustive up to the split-oracle size, otherwise a seeded sample of subsets.
    """
    import random

    member = member or ProductIdeal(product).contains
    n = len(product.dir)
    everything = full(n)
    v = Verdict("product ideal axioms")
    v.record(member(0), {"axiom": "empty set is a member"})
    v.record(not member(everything), {"axiom": "whole product is not a member"})
    v.record(any(member(1 << x) for x in range(n)), {"axiom": "some nonempty member"})
    if n <= MAX_SPLIT_ORACLE:
        members = [h for h in range(1 << n) if member(h)]
    else:
        rng = random.Random(seed)
        members = [h for h in (rng.getrandbits(n) for _ in range(sample)) if member(h)]
        v.bounded()
    for h in members:
        for x in bit_indices(h):
            v.record(member(h ^ (1 << x)), {"axiom": "downward closed", "member": product.dir.render(h)})
    top = [h for h in members if not any(member(h | 1 << x) for x in range(n) if not h >> x & 1)]
    for a, b in itertools.combinations(top, 2):
        v.record(member(a | b), {"axiom": "union closed", "left": product.dir.render(a), "right": product.dir.render(b)})
    return v


def iterated_i_limit(fam: IteratedFamily, topology: FiniteTopology) -> frozenset[str]:
    """Points x0 reachable by some choice of inner limits L(m), rows without a limit never in U."""
    choices = []
    for m in range(len(fam.dir)):
        lims = net_i_limits(fam.row(m), fam.inner_ideals[m], topology)
        choices.append(sorted(topology.index[x] for x in lims) or [None])
    out = set()
    for i, x in enumerate(topology.points):
        opens = topology.opens_containing(i)
        for pick in itertools.product(*choices):
            if all(fam.ideal_d.contains(sum(1 << m for m, c in enumerate(pick) if c is None or not u >> c & 1)) for u in opens):
                out.add(x)
                break
    return frozenset(out)


def check_iterated_limits(fam: IteratedFamily, topology: FiniteTopology) -> Verdict:
    """S o R converges under the composite ideal to every iterated limit."""
    product = build_iterated_product(fam)
    ideal = ProductIdeal(product)
    v = Verdict("S∘R converges to the iterated limit")
    for x in sorted(iterated_i_limit(fam, topology)):
        v.record(net_i_converges(product.net, ideal.contains, topology, x), {"family": str(fam), "limit": x})
    return v


def check_order_ideal_classical(net: Net, topology: FiniteTopology) -> Verdict:
    """I_0-convergence is classical convergence; D-admissible ideals are weaker still."""
    i0 = order_ideal_I0(net.dir)
    if not i0.nontrivial:
        raise DegenerateI0("every element is a top, so the order ideal is {∅}")
    v = Verdict("order-ideal convergence = classical convergence")
    admissible = d_admissible_ideals(net.dir) if len(net.dir) <= 4 else [i0]
    for x in topology.points:
        classical = classical_converges(net, topology, x)
        v.record(classical == net_i_converges(net, i0, topology, x), {"net": str(net), "point": x, "classical": classical})
        if classical:
            for ideal in admissible:
                v.record(net_i_converges(net, ideal, topology, x), {"net": str(net), "point": x, "ideal": str(ideal)})
    return v


def nets_on(directed: DirectedSet, points: Iterable[str]) -> Iterable[Net]:
    for values in itertools.product(tuple(points), repeat=len(directed)):
        yield Net(directed, values)
