from __future__ import annotations

import pytest

from iconv.bits import bit_indices, full, popcount, submasks
from iconv.errors import AxiomViolation, DuplicatePoint, UnknownPoint
from iconv.topology import closure_in, discrete, enumerate_topologies, indiscrete, interior_in, sierpinski, validate_topology

import oracles


def test_bit_helpers():
    assert full(3) == 0b111
    assert list(bit_indices(0b1010)) == [1, 3]
    assert popcount(0b1011) == 3
    assert sorted(submasks(0b101)) == [0, 0b001, 0b100, 0b101]


def test_sierpinski_is_valid():
    t = validate_topology(["a", "b"], [[], ["a"], ["a", "b"]])
    assert t.size == 2
    assert t.is_open(t.mask("a")) and not t.is_open(t.mask("b"))


def test_missing_whole_space_is_rejected():
    with pytest.raises(AxiomViolation) as err:
        validate_topology(["a", "b"], [[], ["a"], ["b"]])
    assert err.value.violations


def test_all_subsets_give_discrete():
    t = validate_topology("abc", [s for s in oracles.powerset("abc")])
    assert t == discrete("abc")


def test_duplicate_point():
    with pytest.raises(DuplicatePoint):
        validate_topology(["a", "a"], [[], ["a"]])


def test_unknown_point_in_mask():
    with pytest.raises(UnknownPoint):
        sierpinski().mask("z")


def test_closure_examples():
    s = sierpinski()
    assert s.subset(closure_in(s, s.mask("a"))) == {"a", "b"}
    assert closure_in(s, 0) == 0
    d = discrete("abc")
    assert d.subset(closure_in(d, d.mask("b"))) == {"b"}


@pytest.mark.parametrize("n, count", [(1, 1), (2, 4), (3, 29)])
def test_topology_counts_match_brute_force(n, count):
    points = "abc"[:n]
    ours = {frozenset(frozenset(t.subset(m)) for m in t.opens) for t in enumerate_topologies(points)}
    brute = set(oracles.all_topologies(points))
    assert ours == brute
    assert len(ours) == count


def test_closure_and_interior_match_oracle():
    for t in enumerate_topologies("abc"):
        opens = [t.subset(m) for m in t.opens]
        for a in range(1 << 3):
            assert t.subset(closure_in(t, a)) == oracles.closure("abc", opens, t.subset(a))
            inside = interior_in(t, a)
            assert t.is_open(inside) and inside & a == inside


def test_indiscrete_has_two_opens():
    assert len(indiscrete("abc").opens) == 2
