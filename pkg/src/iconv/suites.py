"""Exhaustive and seeded sweeps that check each theorem on small instances.

Every sweep returns a :class:`~iconv.verdict.Verdict` whose parts name the
instance family that was covered.
"""

from __future__ import annotations

import itertools
import random
from typing import Sequence

from .classgen import (
    NetClass,
    analyse_class,
    close_class,
    default_class_catalog,
    check_condition_J,
    closure_from_class,
    topological_closure_op,
)
from .directed import NET_SHAPE_CATALOG, d_admissible_ideals, enumerate_directed, is_d_admissible, order_ideal_I0, shape
from .epset import NatIdeal
from .errors import DegenerateI0, UnknownTarget
from .ideals import FiniteIdeal, enumerate_ideals
from .netconv import (
    MAX_SPLIT_ORACLE,
    IteratedFamily,
    Net,
    SubnetWitness,
    build_iterated_product,
    check_if_criterion,
    check_order_ideal_classical,
    check_subnet_keeps_limits,
    check_witness_subnet,
    check_iterated_limits,
    compose,
    if_ideal_axioms,
    induced_subnet_ideal,
    net_i_converges,
    nets_on,
    subnet_law_failure,
    check_cluster_closure,
)
from .seqconv import (
    PeriodicSequence,
    SeqClass,
    check_open_closed_limit_laws,
    check_fin_ordinary,
    check_class_in_generated,
    check_topology_recovered,
    close_seq_class,
    default_catalog,
    gamma_of,
    generate_sequence_topology,
)
from .topology import FiniteTopology, enumerate_topologies, points_named
from .verdict import Verdict

SEQUENCE_IDEALS = (NatIdeal.fin(), NatIdeal.residue(2, {0}))


def all_topologies(max_points: int = 3) -> list[FiniteTopology]:
    out = []
    for n in range(1, max_points + 1):
        out.extend(enumerate_topologies(points_named(n)))
    return out


# --- sequences ---------------------------------------------------------------------

def sweep_limit_laws(max_points: int = 3, ideals: Sequence[NatIdeal] = SEQUENCE_IDEALS) -> Verdict:
    v = Verdict(f"open/closed limit laws, all topologies on <= {max_points} points")
    for t in all_topologies(max_points):
        for ideal in ideals:
            v.add(check_open_closed_limit_laws(t, ideal))
    return v


def sweep_class_in_generated(max_points: int = 3, ideals: Sequence[NatIdeal] = SEQUENCE_IDEALS) -> Verdict:
    """Ω ⊂ Γ for Ω = the convergent pairs of each topology, and for Ω = constants."""
    v = Verdict(f"Ω ⊂ Γ, all topologies on <= {max_points} points")
    for t in all_topologies(max_points):
        catalog = default_catalog(t.points)
        for ideal in ideals:
            v.add(check_class_in_generated(gamma_of(t, ideal, catalog), catalog))
    for n in range(1, max_points + 1):
        pts = points_named(n)
        for ideal in ideals:
            constants = SeqClass.make(pts, ideal, [(PeriodicSequence.constant(x), x) for x in pts])
            v.add(check_class_in_generated(constants))
    return v.bounded()


def sweep_topology_recovered(max_points: int = 3, ideals: Sequence[NatIdeal] = SEQUENCE_IDEALS) -> Verdict:
    v = Verdict(f"τ ⊂ τ′, all topologies on <= {max_points} points")
    for t in all_topologies(max_points):
        for ideal in ideals:
            v.add(check_topology_recovered(t, ideal)[0])
    return v


def random_seq_class(rng: random.Random, points: Sequence[str], ideal: NatIdeal, seeds: int = 3) -> SeqClass:
    catalog = default_catalog(tuple(points))
    pairs = [(rng.choice(catalog.universe), rng.choice(points)) for _ in range(seeds)]
    return close_seq_class(SeqClass.make(points, ideal, pairs), catalog)


def random_closed_seq_classes(trials: int = 200, seed: int = 0) -> Verdict:
    """Random classes closed under C(1)-C(3) generate a topology."""
    rng = random.Random(seed)
    v = Verdict(f"generated family is a topology, {trials} random closed classes")
    for k in range(trials):
        pts = points_named(2 + k % 2)
        ideal = SEQUENCE_IDEALS[(k // 2) % 2]
        omega = random_seq_class(rng, pts, ideal, seeds=rng.randint(1, 4))
        report = generate_sequence_topology(omega)
        axioms_ok = report.axioms_hold
        v.record(axioms_ok, {"trial": k, "reason": "closure did not satisfy the axioms"})
        v.add(report.family_verdict())
    return v.bounded()


def sweep_fin_ordinary(max_points: int = 3) -> Verdict:
    v = Verdict(f"Fin-convergence = ordinary convergence, topologies on <= {max_points} points")
    for t in all_topologies(max_points):
        v.add(check_fin_ordinary(t))
    return v


# --- nets ------------------------------------------------------------------------

def sweep_cluster_closure(max_points: int = 3, shapes: Sequence[str] = NET_SHAPE_CATALOG) -> Verdict:
    v = Verdict(f"cluster point characterization, {len(shapes)} shapes, topologies on <= {max_points} points")
    dirs = [(name, shape(name)) for name in shapes]
    for t in all_topologies(max_points):
        for name, d in dirs:
            part = Verdict(f"{name} on {t}")
            ideals = enumerate_ideals(d.elements)
            for net in nets_on(d, t.points):
                for ideal in ideals:
                    part.absorb(check_cluster_closure(net, ideal, t))
            v.add(part)
    return v


def subnet_maps(parent, sub) -> list[tuple[int, ...]]:
    """Every map sub -> parent satisfying the subnet law."""
    out = []
    for theta in itertools.product(range(len(parent)), repeat=len(sub)):
        if subnet_law_failure(parent, SubnetWitness(sub, theta)) is None:
            out.append(theta)
    return out


def small_directed(max_size: int = 3):
    return [d for n in range(1, max_size + 1) for d in enumerate_directed(n)]


def sweep_subnet_keeps_limits(max_size: int = 3, max_points: int = 2) -> Verdict:
    """Subnets keep limits under the induced ideal, at every admissible I_D."""
    v = Verdict(f"subnet preservation, |D|,|E| <= {max_size}, spaces on {max_points} points")
    tops = enumerate_topologies(points_named(max_points))
    dirs = small_directed(max_size)
    degenerate = 0
    for d in dirs:
        admissible = d_admissible_ideals(d) if len(d) > 1 else []
        for e in dirs:
            for theta in subnet_maps(d, e):
                w = SubnetWitness(e, theta)
                for ideal in admissible:
                    if not induced_subnet_ideal(w, ideal).nontrivial:
                        degenerate += 1
                        continue
                    for t in tops:
                        for net in nets_on(d, t.points):
                            r = check_subnet_keeps_limits(net, w, ideal, t)
                            v.absorb(r)
    v.note = f"{degenerate} (subnet, ideal) pairs skipped: induced ideal trivial"
    return v


def sweep_induced_composition(max_size: int = 3) -> Verdict:
    """The ideal induced by theta o theta2 equals the one induced by theta2 from I_E."""
    v = Verdict(f"induced-ideal composition, |D|,|E|,|E2| <= {max_size}")
    dirs = small_directed(max_size)
    maps = {(i, j): subnet_maps(d, e) for i, d in enumerate(dirs) for j, e in enumerate(dirs)}
    for i, d in enumerate(dirs):
        ideals = d_admissible_ideals(d) if len(d) > 1 else []
        for j, e in enumerate(dirs):
            for theta in maps[(i, j)]:
                w = SubnetWitness(e, theta)
                induced = {id(ideal): induced_subnet_ideal(w, ideal).ideal for ideal in ideals}
                for k, e2 in enumerate(dirs):
                    for theta2 in maps[(j, k)]:
                        w2 = SubnetWitness(e2, theta2)
                        both = compose(w, w2)
                        for ideal in ideals:
                            direct = induced_subnet_ideal(both, ideal).ideal
                            stepwise = induced_subnet_ideal(w2, induced[id(ideal)]).ideal
                            v.record(direct == stepwise, {"theta": theta, "theta2": theta2, "ideal": str(ideal)})
    return v


def sweep_witness_subnets(max_size: int = 3, max_points: int = 2) -> Verdict:
    v = Verdict(f"witness subnets, |D| <= {max_size}, spaces on {max_points} points")
    tops = enumerate_topologies(points_named(max_points))
    for d in small_directed(max_size):
        if len(d) == 1:
            continue
        for ideal in d_admissible_ideals(d):
            for t in tops:
                for net in nets_on(d, t.points):
                    for x in t.points:
                        if not net_i_converges(net, ideal, t, x):
                            r = check_witness_subnet(net, ideal, t, x)
                            v.absorb(r)
    return v


def random_family(rng: random.Random, points: Sequence[str], max_outer: int = 2, max_inner: int = 3) -> IteratedFamily:
    outer = rng.choice([d for n in range(2, max_outer + 1) for d in enumerate_directed(n) if enumerate_ideals(d.elements)])
    inner = [rng.choice([d for n in range(2, max_inner + 1) for d in enumerate_directed(n)]) for _ in range(len(outer))]
    table = [[rng.choice(points) for _ in range(len(e))] for e in inner]
    return IteratedFamily.make(
        outer,
        inner,
        table,
        rng.choice(enumerate_ideals(outer.elements)),
        [rng.choice(enumerate_ideals(e.elements)) for e in inner],
    )


def random_iterated_limits(trials: int = 500, seed: int = 0) -> Verdict:
    rng = random.Random(seed)
    v = Verdict(f"iterated limits, {trials} random families")
    spaces = all_topologies(3)
    nonempty = 0
    for _ in range(trials):
        t = rng.choice(spaces)
        fam = random_family(rng, t.points)
        r = check_iterated_limits(fam, t)
        nonempty += r.checked > 0
        v.absorb(r)
    v.note = f"{nonempty} of {trials} families have an iterated limit"
    return v


def ideal_combinations(fam: IteratedFamily):
    """The family with every choice of nontrivial outer and inner ideals."""
    outer = enumerate_ideals(fam.dir.elements)
    inner = [enumerate_ideals(e.elements) for e in fam.inner]
    for i_d in outer:
        for choice in itertools.product(*inner):
            yield IteratedFamily.make(fam.dir, fam.inner, fam.table, i_d, choice)


def sweep_product_ideal(families: Sequence[IteratedFamily]) -> tuple[Verdict, Verdict]:
    """Fast criterion vs split definition, and the ideal axioms, over all ideal choices."""
    crit = Verdict(f"fast criterion = split definition, {len(families)} families")
    axioms = Verdict(f"product ideal axioms, {len(families)} families")
    for fam in families:
        for variant in ideal_combinations(fam):
            product = build_iterated_product(variant)
            crit.add(check_if_criterion(product))
            axioms.add(if_ideal_axioms(product))
    return crit, axioms


def sweep_closure_round_trip(max_points: int = 3) -> Verdict:
    """Topological classes round-trip through the closure operator."""
    v = Verdict(f"closure round trip, all topologies on <= {max_points} points")
    for t in all_topologies(max_points):
        cls = NetClass.topological(t)
        part = Verdict(f"topological class of {t}")
        same = closure_from_class(cls).table == topological_closure_op(t).table
        part.record(same, {"topology": str(t), "reason": "closure differs from topological closure"})
        report = analyse_class(cls)
        for r in report.verdicts():
            part.add(r)
        part.record(report.topology == t, {"topology": str(t), "generated": str(report.topology)})
        part.record(report.completeness is not None, {"topology": str(t), "reason": report.note})
        v.add(part)
    return v


def sweep_condition_J(max_points: int = 3, trials: int = 60, seed: int = 0) -> Verdict:
    """Induced ideals stay admissible: topological classes plus seeded closed classes."""
    v = Verdict(f"(J) on topological classes (<= {max_points} points) and {trials} random closed classes")
    for t in all_topologies(max_points):
        v.absorb(check_condition_J(NetClass.topological(t)))
    rng = random.Random(seed)
    for k in range(trials):
        points = points_named(2 + k % 2)
        universe = default_class_catalog().universe(points)
        seeds = {rng.choice(universe) for _ in range(rng.randint(1, 2))}
        v.absorb(check_condition_J(close_class(NetClass.make(points, seeds), "abd", seed=seed)))
    return v.bounded()


def sweep_order_ideal_classical(max_size: int = 4, max_points: int = 3) -> Verdict:
    v = Verdict(f"order-ideal = classical convergence, |D| <= {max_size}, topologies on <= {max_points} points")
    spaces = all_topologies(max_points)
    skipped = 0
    for d in small_directed(max_size):
        if not order_ideal_I0(d).nontrivial:
            skipped += 1
            continue
        for t in spaces:
            for net in nets_on(d, t.points):
                try:
                    r = check_order_ideal_classical(net, t)
                except DegenerateI0:
                    continue
                v.absorb(r)
    v.note = f"{skipped} directed sets skipped: every element is a top"
    return v


# --- suites over a workspace -----------------------------------------------------------

SUITE_IDS = ("2.2", "2.3", "2.5", "2.6", "3.1", "3.2", "3.3", "3.4", "3.5", "J", "remark2.1", "remark3.1")


def _nat_ideals(ws) -> list[tuple[str, NatIdeal]]:
    return list(ws.nat_ideals.items()) or [(str(i), i) for i in SEQUENCE_IDEALS]


def _ws_ideals_for(ws, net: Net) -> list[tuple[str, FiniteIdeal]]:
    """Declared ideals on the net's index set, plus the order ideal when nontrivial."""
    out = [(n, i) for n, (d, i) in ws.ideals.items() if ws.directed.get(d) == net.dir]
    i0 = order_ideal_I0(net.dir)
    if i0.nontrivial and all(i != i0 for _, i in out):
        out.append(("order", i0))
    return out


def _laws(ws, which: int) -> list[Verdict]:
    out = []
    for tname, (_, t) in ws.topologies.items():
        for iname, ideal in _nat_ideals(ws):
            part = check_open_closed_limit_laws(t, ideal).parts[which]
            part.check = f"{part.check} [{tname}, {iname}]"
            out.append(part)
    if ws.exhaustive:
        sweep = sweep_limit_laws(ws.exhaustive)
        out.append(_pick_parts(sweep, which))
    return out


def _pick_parts(sweep: Verdict, which: int) -> Verdict:
    v = Verdict(sweep.check + (" (open sets)" if which == 0 else " (closed sets)"))
    for p in sweep.parts:
        v.absorb(p.parts[which])
    return v


def suite_class_in_generated(ws) -> list[Verdict]:
    out = []
    for cname, (_, omega) in ws.seqclasses.items():
        report = generate_sequence_topology(omega, check_axioms=False)
        fam = report.family_verdict()
        fam.check = f"{fam.check} [{cname}]"
        out.append(fam)
        v = check_class_in_generated(omega)
        v.check = f"{v.check} [{cname}]"
        out.append(v)
    if ws.exhaustive:
        out.append(sweep_class_in_generated(ws.exhaustive))
        out.append(random_closed_seq_classes(seed=ws.seed))
    return out


def suite_topology_recovered(ws) -> list[Verdict]:
    out = []
    for tname, (_, t) in ws.topologies.items():
        for iname, ideal in _nat_ideals(ws):
            v = check_topology_recovered(t, ideal)[0]
            v.check = f"{v.check} [{tname}, {iname}]"
            out.append(v)
    if ws.exhaustive:
        out.append(sweep_topology_recovered(ws.exhaustive))
    return out


def suite_fin_ordinary(ws) -> list[Verdict]:
    out = []
    residues = [i for _, i in ws.nat_ideals.items() if i.kind == "residue"]
    for tname, (_, t) in ws.topologies.items():
        v = check_fin_ordinary(t, ideals=residues)
        v.check = f"{v.check} [{tname}]"
        out.append(v)
    if ws.exhaustive:
        out.append(sweep_fin_ordinary(ws.exhaustive))
    return out


def suite_cluster_closure(ws) -> list[Verdict]:
    out = []
    for nname, (space, net) in ws.nets.items():
        for tname, t in ws.topologies_on(space):
            v = Verdict(f"cluster point characterization [{nname}, {tname}]")
            for _, ideal in _ws_ideals_for(ws, net):
                if ideal.nontrivial:
                    v.absorb(check_cluster_closure(net, ideal, t))
            out.append(v)
    if ws.exhaustive:
        out.append(sweep_cluster_closure(ws.exhaustive))
    return out


def suite_subnet_keeps_limits(ws) -> list[Verdict]:
    out = []
    for wname, (dname, w) in ws.subnets.items():
        d = ws.directed[dname]
        v = Verdict(f"subnet preservation [{wname}]")
        skipped = 0
        for nname, (space, net) in ws.nets.items():
            if net.dir != d:
                continue
            for _, ideal in _ws_ideals_for(ws, net):
                if not induced_subnet_ideal(w, ideal).nontrivial:
                    skipped += 1
                    continue
                for _, t in ws.topologies_on(space):
                    v.absorb(check_subnet_keeps_limits(net, w, ideal, t))
        if skipped:
            v.note = f"{skipped} ideal choices skipped: induced ideal trivial"
        out.append(v)
    if ws.exhaustive:
        out.append(sweep_subnet_keeps_limits())
        out.append(sweep_induced_composition())
    return out


def suite_witness_subnets(ws) -> list[Verdict]:
    out = []
    for nname, (space, net) in ws.nets.items():
        v = Verdict(f"witness subnets [{nname}]")
        for _, ideal in _ws_ideals_for(ws, net):
            if not is_d_admissible(ideal, net.dir):
                continue
            for _, t in ws.topologies_on(space):
                for x in t.points:
                    if not net_i_converges(net, ideal, t, x):
                        v.absorb(check_witness_subnet(net, ideal, t, x))
        out.append(v)
    if ws.exhaustive:
        out.append(sweep_witness_subnets())
    return out


def suite_iterated_limits(ws) -> list[Verdict]:
    out = []
    small = []
    for fname, (space, fam) in ws.families.items():
        v = Verdict(f"S∘R converges to the iterated limit [{fname}]")
        for _, t in ws.topologies_on(space):
            v.absorb(check_iterated_limits(fam, t))
        out.append(v)
        if fam.size <= MAX_SPLIT_ORACLE:
            small.append(fam)
    if small:
        out.extend(sweep_product_ideal(small))
    if ws.exhaustive:
        out.append(random_iterated_limits(seed=ws.seed))
    return out


def class_theorem_verdict(cls: NetClass, name: str, seed: int = 0) -> Verdict:
    """Conclusions about a class, each checked only where its hypotheses hold.

    Closure axioms and soundness need (a), (b), (d); completeness needs all of
    (a)-(d) and (J).  Failing hypotheses are named in the note, not counted.
    """
    report = analyse_class(cls, seed=seed)
    v = Verdict(f"closure operator and generated topology [{name}]")
    holds = dict(zip("abcdJ", (h.ok for h in report.conditions)))
    failing = [h.check for h in report.conditions if not h.ok]
    for h in report.conditions:
        if h.ok:
            v.add(h)
    if not (holds["a"] and holds["b"] and holds["d"]):
        v.note = "hypotheses fail: " + ", ".join(failing) + "; nothing is claimed"
        return v
    v.add(report.kuratowski)
    if report.soundness is not None:
        v.add(report.soundness)
    if report.completeness is not None:
        v.add(report.completeness)
    elif failing:
        v.note = "completeness not claimed, hypotheses fail: " + ", ".join(failing)
    return v


def suite_closure_round_trip(ws) -> list[Verdict]:
    out = [class_theorem_verdict(cls, cname, ws.seed) for cname, (_, cls) in ws.netclasses.items()]
    if ws.exhaustive:
        out.append(sweep_closure_round_trip(ws.exhaustive))
    return out


def suite_subnet_condition(ws) -> list[Verdict]:
    out = []
    for cname, (_, cls) in ws.netclasses.items():
        v = check_condition_J(cls)
        v.check = f"{v.check} [{cname}]"
        out.append(v)
    if ws.exhaustive:
        out.append(sweep_condition_J(ws.exhaustive, seed=ws.seed))
    return out


def suite_order_ideal_classical(ws) -> list[Verdict]:
    out = []
    for nname, (space, net) in ws.nets.items():
        if not order_ideal_I0(net.dir).nontrivial:
            continue
        v = Verdict(f"order-ideal = classical convergence [{nname}]")
        for _, t in ws.topologies_on(space):
            v.absorb(check_order_ideal_classical(net, t))
        out.append(v)
    if ws.exhaustive:
        out.append(sweep_order_ideal_classical(4, ws.exhaustive))
    return out


SUITES = {
    "2.2": lambda ws: _laws(ws, 0),
    "2.3": lambda ws: _laws(ws, 1),
    "2.5": suite_class_in_generated,
    "2.6": suite_topology_recovered,
    "3.1": suite_cluster_closure,
    "3.2": suite_subnet_keeps_limits,
    "3.3": suite_witness_subnets,
    "3.4": suite_iterated_limits,
    "3.5": suite_closure_round_trip,
    "J": suite_subnet_condition,
    "remark2.1": suite_fin_ordinary,
    "remark3.1": suite_order_ideal_classical,
}


def run_suite(ws, suite_id: str) -> list[tuple[str, list[Verdict]]]:
    """Run one suite (or ``all``) and return (suite id, verdicts) pairs."""
    ids = SUITE_IDS if suite_id == "all" else (suite_id,)
    out = []
    for sid in ids:
        if sid not in SUITES:
            raise UnknownTarget(f"unknown suite {sid!r}; choose from {', '.join(SUITE_IDS)} or all")
        out.append((sid, SUITES[sid](ws)))
    return out
