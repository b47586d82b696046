from __future__ import annotations

import pytest

from iconv.epset import EVENS, NATURALS, ODDS, EpSet, NatIdeal
from iconv.errors import FiniteSelection, UnknownPoint
from iconv.seqconv import (
    PeriodicSequence,
    SeqClass,
    check_C1,
    check_C2,
    check_C3,
    check_open_closed_limit_laws,
    check_fin_ordinary,
    check_class_in_generated,
    check_topology_recovered,
    constant_pairs,
    default_catalog,
    gamma_of,
    generate_sequence_topology,
    insert_terms,
    open_wrt_class,
    ordinary_converges,
    parse_sequence,
    seq_i_cluster_points,
    seq_i_converges,
    seq_i_limits,
    sequence_universe,
    subsequence,
)
from iconv.topology import discrete, enumerate_topologies, indiscrete, sierpinski

import oracles

FIN = NatIdeal.fin()
EVEN = NatIdeal.residue(2, {0})
ALT = parse_sequence("(a b)")


def test_constant_converges_everywhere():
    for t in enumerate_topologies("ab"):
        for ideal in (FIN, EVEN):
            assert seq_i_converges(PeriodicSequence.constant("a"), t, ideal, "a")


def test_alternating_on_sierpinski_with_residue_ideal():
    assert seq_i_limits(ALT, sierpinski(), EVEN) == {"a", "b"}


def test_alternating_on_discrete_with_fin():
    d = discrete("ab")
    assert seq_i_limits(ALT, d, FIN) == frozenset()
    assert seq_i_cluster_points(ALT, d, FIN) == {"a", "b"}


def test_indiscrete_every_point_is_a_limit():
    t = indiscrete("abc")
    for s in sequence_universe(t.points, 2, 2):
        assert seq_i_limits(s, t, FIN) == set(t.points)


def test_unknown_limit_point():
    with pytest.raises(UnknownPoint):
        seq_i_converges(ALT, sierpinski(), FIN, "z")


def test_insert_terms():
    assert insert_terms(PeriodicSequence.constant("a"), [(1, "b"), (2, "b")]) == PeriodicSequence.make(["b", "b"], ["a"])
    assert insert_terms(ALT, []) == ALT


def test_subsequence():
    assert subsequence(ALT, NATURALS) == ALT
    assert subsequence(ALT, ODDS) == PeriodicSequence.constant("a")
    assert subsequence(PeriodicSequence.constant("a"), EVENS) == PeriodicSequence.constant("a")
    with pytest.raises(FiniteSelection):
        subsequence(ALT, EpSet.finite([1, 2]))


def test_values_follow_prefix_then_cycle():
    s = parse_sequence("[b b](a c)")
    assert s.values(6) == oracles.seq_values(["b", "b"], ["a", "c"], 6)


@pytest.mark.parametrize("ideal, tag", [(FIN, "fin"), (EVEN, "even")])
def test_convergence_matches_oracle(ideal, tag):
    for n in (1, 2, 3):
        points = "abc"[:n]
        for t in enumerate_topologies(points):
            opens = [t.subset(m) for m in t.opens]
            for s in sequence_universe(t.points, 2, 2):
                for x in points:
                    expected = oracles.seq_converges(s.prefix, s.cycle, opens, points, tag, x)
                    assert seq_i_converges(s, t, ideal, x) == expected, (str(t), str(s), x)


def test_fin_matches_ordinary_convergence_oracle():
    for t in enumerate_topologies("abc"):
        opens = [t.subset(m) for m in t.opens]
        for s in sequence_universe(t.points, 2, 2):
            for x in t.points:
                assert ordinary_converges(s, t, x) == oracles.seq_ordinary(s.prefix, s.cycle, opens, x)


def test_fin_ordinary_forward_and_strictness():
    for t in enumerate_topologies("ab"):
        assert check_fin_ordinary(t).ok
    # ordinary convergence fails for the alternating sequence, residue convergence holds
    assert not ordinary_converges(ALT, sierpinski(), "a")
    assert seq_i_converges(ALT, sierpinski(), EVEN, "a")


# --- classes ---------------------------------------------------------------------

def test_C1_pass_and_fail():
    pts = ("a", "b")
    assert check_C1(SeqClass.make(pts, FIN, constant_pairs(pts))).ok
    missing = SeqClass.make(pts, FIN, [(PeriodicSequence.constant("b"), "b")])
    v = check_C1(missing)
    assert not v.ok and "a" in str(v.witnesses[0])


def test_gamma_satisfies_C2_C3_under_fin():
    g = gamma_of(sierpinski(), FIN)
    assert check_C2(g).ok and check_C3(g).ok


def test_residue_ideal_breaks_insertions_and_subsequences():
    # shifting by one term swaps the residue classes, so the residue ideal is not shift invariant
    g = gamma_of(sierpinski(), EVEN)
    assert check_C1(g).ok
    assert not check_C2(g).ok
    assert not check_C3(g).ok


def _sierpinski_generating_class():
    pts = ("0", "1")
    catalog = default_catalog(pts)
    pairs = constant_pairs(pts) | {(s, "0") for s in catalog.universe}
    return SeqClass.make(pts, FIN, pairs), catalog


def test_open_wrt_class_examples():
    omega, _ = _sierpinski_generating_class()
    assert open_wrt_class(0, omega) and open_wrt_class(0b11, omega)
    assert not open_wrt_class(0b01, omega)  # {0}
    assert open_wrt_class(0b10, omega)  # {1}


def test_generated_topologies():
    omega, catalog = _sierpinski_generating_class()
    report = generate_sequence_topology(omega, catalog)
    assert report.topology is not None
    assert sorted(report.topology.opens) == [0, 0b10, 0b11]
    assert check_C3(omega, catalog).ok

    const = SeqClass.make(("0", "1"), FIN, constant_pairs(("0", "1")))
    assert generate_sequence_topology(const).topology == discrete(("0", "1"))
    single = SeqClass.make(("a",), FIN, constant_pairs(("a",)))
    assert generate_sequence_topology(single).topology.opens == (0, 1)


def test_class_in_generated_examples():
    omega, catalog = _sierpinski_generating_class()
    assert check_class_in_generated(omega, catalog).ok
    assert check_class_in_generated(SeqClass.make(("a", "b"), FIN, constant_pairs(("a", "b")))).ok


def test_topology_recovered_small():
    for t in (sierpinski(), indiscrete("ab")):
        v, generated = check_topology_recovered(t, FIN)
        assert v.ok and generated == t


def test_gamma_on_discrete_is_eventually_constant():
    d = discrete("ab")
    g = gamma_of(d, FIN)
    for s, x in g.sorted_pairs():
        assert s.cycle == (x,)


def test_limit_laws_negative_control():
    # the power set of N is no proper ideal, so sequences outside an open set reach inside
    t = sierpinski()
    assert check_open_closed_limit_laws(t, FIN).ok
    trivial = NatIdeal.power()
    assert not check_open_closed_limit_laws(t, trivial).ok
