"""Property tests over randomly drawn small instances."""

from __future__ import annotations

import itertools

from hypothesis import assume, given
from hypothesis import strategies as st

from iconv.directed import chain, product_directed, shape, table, validate_directed
from iconv.epset import (
    NATURALS,
    EpSet,
    NatIdeal,
    ep_complement,
    ep_difference,
    ep_intersect,
    ep_is_finite,
    ep_is_subset,
    ep_member,
    ep_union,
    nat_ideal_member,
    natural_density,
)
from iconv.ideals import dual_filter, dual_ideal, enumerate_ideals, principal_ideal
from iconv.netconv import IteratedFamily, ProductIdeal, build_iterated_product
from iconv.seqconv import (
    PeriodicSequence,
    insert_terms,
    seq_i_cluster_points,
    seq_i_limits,
    subsequence,
)
from iconv.topology import enumerate_topologies

import oracles

TOPS3 = enumerate_topologies("abc")
POINT = st.sampled_from("abc")


@st.composite
def epsets(draw):
    modulus = draw(st.integers(1, 6))
    residues = draw(st.sets(st.integers(0, modulus - 1)))
    threshold = draw(st.integers(0, 6))
    prefix = draw(st.sets(st.integers(1, max(threshold, 1))))
    return EpSet.make(threshold, modulus, residues, [p for p in prefix if p <= threshold])


@st.composite
def sequences(draw):
    prefix = draw(st.lists(POINT, max_size=3))
    cycle = draw(st.lists(POINT, min_size=1, max_size=3))
    return PeriodicSequence.make(prefix, cycle)


def _window(*sets):
    top = 1
    for s in sets:
        top = max(top, s.threshold + 4 * s.modulus)
    return range(1, top * 2 + 13)


@given(epsets(), epsets(), epsets())
def test_boolean_algebra_laws(a, b, c):
    for n in _window(a, b, c):
        m = lambda s: ep_member(s, n)  # noqa: E731
        assert m(ep_union(a, ep_union(b, c))) == m(ep_union(ep_union(a, b), c))
        assert m(ep_intersect(a, ep_union(b, c))) == m(ep_union(ep_intersect(a, b), ep_intersect(a, c)))
        assert m(ep_complement(ep_union(a, b))) == m(ep_intersect(ep_complement(a), ep_complement(b)))
        assert m(ep_difference(a, b)) == (m(a) and not m(b))


@given(epsets(), epsets())
def test_operations_are_canonical(a, b):
    # equal membership forces structural equality after canonicalization
    u1, u2 = ep_union(a, b), ep_union(b, a)
    assert u1 == u2
    assert ep_complement(ep_complement(a)) == a


@given(epsets())
def test_density_of_complement(s):
    assert natural_density(s) + natural_density(ep_complement(s)) == 1


@given(epsets())
def test_density_matches_counting(s):
    period = s.modulus * 8
    start = s.threshold + 1
    hits = sum(ep_member(s, n) for n in range(start, start + period))
    assert natural_density(s) * period == hits


@given(epsets(), epsets(), st.sampled_from([NatIdeal.fin(), NatIdeal.residue(2, {0}), NatIdeal.residue(3, {1, 2})]))
def test_nat_ideal_axioms(a, b, ideal):
    assert not nat_ideal_member(ideal, NATURALS)
    finite_part = EpSet.finite([n for n in range(1, 9) if ep_member(a, n)])
    assert nat_ideal_member(ideal, finite_part)
    if nat_ideal_member(ideal, a) and nat_ideal_member(ideal, b):
        assert nat_ideal_member(ideal, ep_union(a, b))
    if nat_ideal_member(ideal, a):
        assert nat_ideal_member(ideal, ep_intersect(a, b))
    if ideal.kind == "fin":
        assert nat_ideal_member(ideal, a) == ep_is_finite(a)
    assert ep_is_subset(ep_intersect(a, b), a)


@given(sequences(), st.lists(st.tuples(st.integers(1, 6), POINT), max_size=2), st.sampled_from(TOPS3))
def test_insertions_keep_fin_limits(s, insertions, t):
    fin = NatIdeal.fin()
    assert seq_i_limits(insert_terms(s, insertions), t, fin) == seq_i_limits(s, t, fin)


@given(sequences(), st.sampled_from(TOPS3), st.sampled_from([NatIdeal.fin(), NatIdeal.residue(2, {0})]))
def test_limits_are_cluster_points(s, t, ideal):
    assert seq_i_limits(s, t, ideal) <= seq_i_cluster_points(s, t, ideal)


@given(sequences(), st.sampled_from(TOPS3), st.integers(1, 4), st.integers(0, 3))
def test_fin_subsequences_keep_limits(s, t, modulus, residue):
    sel = EpSet.progression(modulus, {residue % modulus})
    fin = NatIdeal.fin()
    assert seq_i_limits(s, t, fin) <= seq_i_limits(subsequence(s, sel), t, fin)


@given(sequences(), st.integers(1, 30))
def test_values_follow_definition(s, n):
    assert s.value(n) == oracles.seq_values(s.prefix, s.cycle, n)[n - 1]


@given(st.integers(1, 4), st.data())
def test_dual_round_trip(n, data):
    ideal = data.draw(st.sampled_from(enumerate_ideals(range(n)))) if n > 1 else None
    assume(ideal is not None)
    assert dual_ideal(dual_filter(ideal)) == ideal


@given(st.lists(st.sampled_from(["chain2", "chain3", "vee3", "cluster3"]), min_size=1, max_size=3))
def test_products_are_directed(names):
    p = product_directed([shape(n) for n in names])
    geq = table(p)
    n = len(p)
    if n <= 8:
        assert validate_directed(p.elements, geq) == p
    assert all(geq[i][i] for i in range(n))
    for i, j in itertools.product(range(n), repeat=2):
        assert any(geq[k][i] and geq[k][j] for k in range(n))
        # componentwise order
        assert geq[i][j] == all(shape(name).geq(x, y) for name, x, y in zip(names, p.elements[i], p.elements[j]))


@st.composite
def small_families(draw):
    c2 = chain(2)
    inner = draw(st.lists(st.sampled_from([chain(2), shape("vee3")]), min_size=2, max_size=2))
    assume(len(c2) * len(inner[0]) * len(inner[1]) <= 12)
    ideal_d = draw(st.sampled_from(enumerate_ideals(c2.elements)))
    inner_ideals = [draw(st.sampled_from(enumerate_ideals(e.elements))) for e in inner]
    table_ = [["a"] * len(e) for e in inner]
    return IteratedFamily.make(c2, inner, table_, ideal_d, inner_ideals)


def _sets(ideal):
    return frozenset(frozenset(ideal.subset(m)) for m in ideal.members)


@given(small_families(), st.data())
def test_product_ideal_against_oracle(fam, data):
    product = build_iterated_product(fam)
    n = len(product.dir)
    h = data.draw(st.integers(0, (1 << n) - 1))
    elements = frozenset(product.dir.elements[x] for x in range(n) if h >> x & 1)
    expected = oracles.product_ideal_member(
        fam.dir.elements, [_sets(i) for i in fam.inner_ideals], _sets(fam.ideal_d), product.dir.elements, elements
    )
    assert ProductIdeal(product).contains(h) == expected


@given(small_families(), st.data())
def test_product_ideal_is_downward_and_union_closed(fam, data):
    product = build_iterated_product(fam)
    member = ProductIdeal(product).contains
    n = len(product.dir)
    a, b = data.draw(st.integers(0, (1 << n) - 1)), data.draw(st.integers(0, (1 << n) - 1))
    if member(a):
        assert member(a & b)
        if member(b):
            assert member(a | b)
    assert not member((1 << n) - 1)


@given(st.integers(1, 3))
def test_principal_ideals_are_all_ideals(n):
    ground = list(range(n + 1))
    for top in range(1, (1 << len(ground)) - 1):
        i = principal_ideal(ground, top)
        assert oracles.is_ideal(ground, _sets(i))


def test_closure_is_monotone_for_closed_classes():
    import random

    from iconv.classgen import NetClass, close_class, closure_from_class, default_class_catalog

    rng = random.Random(11)
    cat = default_class_catalog()
    for k in range(20):
        points = ("a", "b", "c")[: 2 + k % 2]
        seeds = {rng.choice(cat.universe(points)) for _ in range(2)}
        cl = closure_from_class(close_class(NetClass.make(points, seeds), "abd", seed=k)).table
        for a, b in itertools.product(range(len(cl)), repeat=2):
            if a & b == a:
                assert cl[a] & cl[b] == cl[a]
