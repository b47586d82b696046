from __future__ import annotations

import pytest

from iconv import parse_workspace
from iconv.classgen import check_class_soundness
from iconv.errors import InputError, UnknownTarget
from iconv.fuzz import fuzz
from iconv.seqconv import generate_sequence_topology


def test_budget_zero():
    r = fuzz("kuratowski", budget=0)
    assert r.tried == 0 and not r.found and "budget 0" in r.summary()


def test_bad_arguments():
    with pytest.raises(UnknownTarget):
        fuzz("nonsense")
    with pytest.raises(UnknownTarget):
        fuzz("kuratowski", drop="everything")
    with pytest.raises(InputError):
        fuzz("topology-axioms", drop="J")
    with pytest.raises(InputError):
        fuzz("soundness", budget=-1)


def test_deterministic_for_a_seed():
    a = fuzz("soundness", "admissible", seed=7, budget=10)
    b = fuzz("soundness", "admissible", seed=7, budget=10)
    assert a.to_dict() == b.to_dict()


@pytest.mark.parametrize("target", ["kuratowski", "soundness", "topology-axioms"])
def test_negative_control_keeps_every_hypothesis(target):
    r = fuzz(target, "none", seed=7, budget=25)
    assert not r.found, r.snippet
    assert r.tried == 25


def test_dropping_admissibility_breaks_soundness_and_replays():
    r = fuzz("soundness", "admissible", seed=7, budget=20)
    assert r.found
    ws = parse_workspace(r.snippet)
    _, cls = ws.netclasses["M"]
    assert not check_class_soundness(cls).ok


def test_dropping_subsequences_breaks_the_topology_axioms():
    r = fuzz("topology-axioms", "C3", seed=7, budget=40)
    assert r.found
    ws = parse_workspace(r.snippet)
    _, omega = ws.seqclasses["C"]
    assert generate_sequence_topology(omega).topology is None


@pytest.mark.parametrize("drop", ["cond-d", "J"])
def test_other_drops_run_to_budget(drop):
    r = fuzz("kuratowski", drop, seed=7, budget=10)
    assert r.tried == 10 or r.found
