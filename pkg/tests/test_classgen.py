from __future__ import annotations

import random

import pytest

from iconv.classgen import (
    NetClass,
    Triple,
    analyse_class,
    check_class_completeness,
    check_class_soundness,
    check_condition_a,
    check_condition_b,
    check_condition_c,
    check_condition_d,
    check_condition_J,
    close_class,
    closure_from_class,
    constant_triples,
    default_class_catalog,
    iterate_closure,
    iterated_compositions,
    kuratowski_check,
    subnet_images,
    tail_proxies,
    topological_closure_op,
    topology_from_closure,
    triple_converges,
)
from iconv.directed import chain, order_ideal_I0
from iconv.errors import NotAClosureOperator, PreconditionsNotMet, UnknownPoint
from iconv.netconv import Net
from iconv.topology import discrete, indiscrete, points_named, sierpinski

import oracles

CAT = default_class_catalog()
AB = ("a", "b")


def _constants(points=AB):
    return NetClass.make(points, constant_triples(points, CAT))


def _table(cls):
    return closure_from_class(cls).table


def test_condition_a():
    assert check_condition_a(_constants()).ok
    missing = NetClass.make(AB, [t for t in constant_triples(AB, CAT) if t.net.values[0] != "a"])
    v = check_condition_a(missing)
    assert not v.ok and "a" in str(v.witnesses[0])
    assert check_condition_a(close_class(missing, "a")).ok


def test_condition_b():
    top = NetClass.topological(sierpinski())
    assert check_condition_b(top).ok
    c3 = chain(3)
    seed = Triple(Net.make(c3, ["b", "b", "a"]), order_ideal_I0(c3).top, "a")
    lonely = NetClass.make(AB, [seed], constants=True)
    v = check_condition_b(lonely)
    assert not v.ok and v.witnesses
    assert check_condition_b(close_class(lonely, "ab")).ok


def test_condition_c():
    assert check_condition_c(NetClass.topological(sierpinski())).ok
    assert check_condition_c(NetClass.topological(discrete(AB))).ok


def test_condition_d_and_negative_control():
    top = NetClass.topological(sierpinski())
    assert check_condition_d(top).ok
    c3 = chain(3)
    seed = Triple(Net.make(c3, ["b", "b", "a"]), order_ideal_I0(c3).top, "a")
    closed = close_class(NetClass.make(AB, [seed]), "abd")
    assert check_condition_d(closed).ok
    # constant composites are members through the constants flag, so strip the others
    composed = {c for _, _, c in iterated_compositions(closed) if len(set(c.net.values)) > 1}
    assert composed
    stripped = closed.with_triples(set(closed.triples) - composed)
    assert not check_condition_d(stripped).ok


def test_closure_examples():
    const = _constants()
    assert all(a == b for a, b in enumerate(_table(const)))
    for cls in (const, NetClass.topological(sierpinski())):
        assert _table(cls)[0] == 0
    s = NetClass.topological(sierpinski())
    cl = closure_from_class(s)
    assert cl.table[0b01] == 0b11 and cl.table[0b10] == 0b10


def test_kuratowski_and_round_trip():
    for cls, expected in (
        (_constants(), discrete(AB)),
        (NetClass.topological(sierpinski()), sierpinski()),
        (NetClass.topological(indiscrete(AB)), indiscrete(AB)),
    ):
        cl = closure_from_class(cls)
        assert kuratowski_check(cl).ok
        assert topology_from_closure(cl) == expected
    assert closure_from_class(NetClass.topological(sierpinski())).table == topological_closure_op(sierpinski()).table


def test_closure_matches_oracle_for_topological_classes():
    from iconv.topology import enumerate_topologies

    for t in enumerate_topologies("abc"):
        opens = [t.subset(m) for m in t.opens]
        table = _table(NetClass.topological(t))
        for a in range(8):
            assert t.subset(table[a]) == oracles.closure("abc", opens, t.subset(a))


def test_non_closure_operator_is_rejected():
    # a one-point "closure" that is not idempotent: {a} -> {a b}, {b} -> {b c}
    points = ("a", "b", "c")
    c3 = chain(3)
    top = order_ideal_I0(c3).top
    triples = [Triple(Net.constant(c3, "a"), top, "b"), Triple(Net.constant(c3, "b"), top, "c")]
    cls = NetClass.make(points, triples, constants=True)
    cl = closure_from_class(cls)
    assert not kuratowski_check(cl).ok
    with pytest.raises(NotAClosureOperator):
        topology_from_closure(cl)
    fixed, rounds = iterate_closure(cl)
    assert rounds >= 1 and kuratowski_check(fixed).ok


def test_soundness_examples():
    assert check_class_soundness(_constants()).ok
    assert check_class_soundness(NetClass.topological(sierpinski())).ok


def test_condition_J_chain_example():
    c3 = chain(3)
    t = Triple(Net.make(c3, ["b", "b", "a"]), order_ideal_I0(c3).top, "a")
    assert check_condition_J(NetClass.make(AB, [t], constants=True)).ok
    assert check_condition_J(NetClass.topological(sierpinski())).ok


def test_completeness_on_topological_classes():
    for t in (sierpinski(), discrete(AB), indiscrete(AB)):
        cls = NetClass.topological(t)
        assert check_class_completeness(cls).ok


def test_completeness_negative_control():
    full = NetClass.topological(sierpinski())
    victim = next(t for t in full.triples if len(set(t.net.values)) > 1)
    cut = full.with_triples(set(full.triples) - {victim})
    forced = check_class_completeness(cut, sierpinski(), preconditions=[])
    assert not forced.ok
    assert [w["triple"] for w in forced.witnesses] == [str(victim)]
    assert not (check_condition_b(cut).ok and check_condition_c(cut).ok)
    with pytest.raises(PreconditionsNotMet):
        check_class_completeness(cut)


def test_constants_class_fails_c_and_is_not_complete():
    # the constants class generates the discrete topology, where every eventually
    # constant net converges; those are not members, and (c) finds no separating subnet
    report = analyse_class(_constants())
    named = {v.check: v for v in report.conditions}
    assert not named["(c) non-members have a separating subnet"].ok
    assert report.kuratowski.ok and report.topology == discrete(AB)
    assert report.soundness.ok
    assert report.completeness is None and "(c)" in report.note


def test_tail_proxies_and_subnet_images():
    proxies = tail_proxies("a", "b", CAT)
    assert len(proxies) == len(CAT.shapes)
    assert all(set(p.net.values) == {"a"} and p.limit == "b" and p.nontrivial for p in proxies)
    c3 = chain(3)
    t = Triple(Net.make(c3, ["b", "b", "a"]), order_ideal_I0(c3).top, "a")
    images = [s for _, s in subnet_images(t, CAT)]
    assert images and all(s.nontrivial and s.limit == "a" for s in images)
    # the one-point cofinal subnet at the top becomes the constant-a proxies
    assert set(proxies_for := tail_proxies("a", "a", CAT)) <= set(images)
    assert proxies_for


def test_unknown_limit_point():
    c3 = chain(3)
    with pytest.raises(UnknownPoint):
        NetClass.make(AB, [Triple(Net.constant(c3, "a"), order_ideal_I0(c3).top, "z")])


def test_closed_classes_are_kuratowski_and_sound():
    rng = random.Random(3)
    for k in range(40):
        points = points_named(2 + k % 2)
        universe = CAT.universe(points)
        seeds = {rng.choice(universe) for _ in range(rng.randint(1, 2))}
        cls = close_class(NetClass.make(points, seeds), "abd", seed=k)
        cl = closure_from_class(cls)
        assert kuratowski_check(cl).ok
        assert check_class_soundness(cls).ok
        for t in cls.triples:
            assert triple_converges(t, topology_from_closure(cl))
