"""Seeded counterexample search: drop one hypothesis and look for a failing class.

Each sample is a small class grown from a few random seed members and closed
under whatever conditions were not dropped.  A sample counts only if it still
meets every hypothesis that was kept; the target property is then checked.
The first failure is written out as a workspace snippet that replays it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .classgen import (
    NetClass,
    Triple,
    check_class_soundness,
    check_condition_a,
    check_condition_b,
    check_condition_d,
    check_condition_J,
    close_class,
    closure_from_class,
    default_class_catalog,
    ideal_nontrivial,
    kuratowski_check,
)
from .epset import NatIdeal
from .errors import InputError, UnknownTarget
from .seqconv import SeqClass, check_C2, check_C3, close_seq_class, default_catalog, generate_sequence_topology
from .topology import points_named
from .verdict import Verdict

TARGETS = ("topology-axioms", "kuratowski", "soundness")
DROPS = ("none", "C3", "cond-d", "admissible", "J")
_APPLIES = {
    "topology-axioms": {"none", "C3"},
    "kuratowski": {"none", "cond-d", "admissible", "J"},
    "soundness": {"none", "cond-d", "admissible", "J"},
}


@dataclass
class FuzzResult:
    target: str
    drop: str
    seed: int
    budget: int
    tried: int = 0
    skipped: int = 0
    snippet: str | None = None
    replay: str | None = None
    verdict: Verdict = field(default_factory=lambda: Verdict("fuzz"))

    @property
    def found(self) -> bool:
        return self.snippet is not None

    def summary(self) -> str:
        if self.found:
            return f"counterexample after {self.tried} samples"
        if self.budget == 0:
            return "budget 0: nothing tried"
        return f"no counterexample in budget ({self.tried} samples, {self.skipped} skipped for unmet hypotheses)"

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "drop": self.drop,
            "seed": self.seed,
            "budget": self.budget,
            "tried": self.tried,
            "skipped": self.skipped,
            "found": self.found,
            "snippet": self.snippet,
            "replay": self.replay,
        }


# --- snippets ----------------------------------------------------------------------

def _space_line(points) -> str:
    return "space X = {" + " ".join(points) + "}"


def _nat_line(ideal: NatIdeal) -> str:
    if ideal.kind == "fin":
        return "ideal-nat F = fin"
    return f"ideal-nat F = residue mod {ideal.modulus} classes {{{' '.join(str(c) for c in sorted(ideal.classes))}}}"


def _triple_item(t: Triple, catalog) -> str:
    d = t.dir
    name = catalog.shape_name(d)
    members = " ".join(d.elements[i] for i in range(len(d)) if t.top >> i & 1)
    return f"{name} [{' '.join(t.net.values)}] principal {{{members}}} -> {t.limit}"


def seq_snippet(points, ideal: NatIdeal, pairs, flags: str) -> str:
    items = " ; ".join(f"{s} -> {x}" for s, x in pairs)
    return "\n".join([_space_line(points), _nat_line(ideal), f"seqclass C on X with F = {items} ; closed [{flags}]", ""])


def net_snippet(points, seeds, close: str, seed: int) -> str:
    catalog = default_class_catalog()
    items = " ; ".join(_triple_item(t, catalog) for t in seeds)
    return "\n".join([_space_line(points), f"seed {seed}", f"netclass M on X = {items} ; closed {close}", ""])


# --- samplers ------------------------------------------------------------------------

def _seq_sample(rng: random.Random, drop: str):
    points = points_named(rng.choice((2, 3)))
    ideal = rng.choice((NatIdeal.fin(), NatIdeal.residue(2, {0})))
    catalog = default_catalog(points)
    pairs = sorted({(rng.choice(catalog.universe), rng.choice(points)) for _ in range(rng.randint(1, 3))}, key=lambda p: (str(p[0]), p[1]))
    subsequences = drop != "C3"
    omega = close_seq_class(SeqClass.make(points, ideal, pairs), catalog, subsequences=subsequences)
    flags = "C1 C2 C3" if subsequences else "C1 C2"
    return points, ideal, pairs, omega, flags


def _net_universe(points, admissible: bool) -> list[Triple]:
    base = default_class_catalog().universe(points)
    if admissible:
        return base
    # every nontrivial principal ideal, not only the admissible ones
    out = []
    seen = set()
    for t in base:
        for top in range(1, t.dir.full):
            s = Triple(t.net, top, t.limit)
            if ideal_nontrivial(top, len(t.dir)) and s not in seen:
                seen.add(s)
                out.append(s)
    return out


def _net_sample(rng: random.Random, drop: str, seed: int):
    points = points_named(rng.choice((2, 3)))
    universe = _net_universe(points, admissible=drop != "admissible")
    seeds = sorted({rng.choice(universe) for _ in range(rng.randint(1, 2))}, key=Triple.sort_key)
    close = "ab" if drop == "cond-d" else "abd"
    cls = close_class(NetClass.make(points, seeds), close, seed=seed)
    return points, seeds, close, cls


def _net_hypotheses(cls: NetClass, drop: str, seed: int) -> bool:
    checks = [check_condition_a(cls), check_condition_b(cls)]
    if drop != "cond-d":
        checks.append(check_condition_d(cls, seed=seed))
    if drop != "J":
        checks.append(check_condition_J(cls))
    return all(c.ok for c in checks)


# --- driver --------------------------------------------------------------------------

def fuzz(target: str, drop: str = "none", seed: int = 0, budget: int = 50, file_hint: str = "counterexample.ws") -> FuzzResult:
    if target not in TARGETS:
        raise UnknownTarget(f"unknown target {target!r}; choose from {', '.join(TARGETS)}")
    if drop not in DROPS:
        raise UnknownTarget(f"unknown hypothesis {drop!r}; choose from {', '.join(DROPS)}")
    if drop not in _APPLIES[target]:
        raise InputError(f"dropping {drop} does not apply to target {target}")
    if budget < 0:
        raise InputError("budget must be non-negative")
    result = FuzzResult(target, drop, seed, budget)
    result.verdict = Verdict(f"fuzz {target} without {drop}")
    rng = random.Random(seed)
    for _ in range(budget):
        result.tried += 1
        if target == "topology-axioms":
            points, ideal, pairs, omega, flags = _seq_sample(rng, drop)
            if not check_C2(omega).ok or (drop != "C3" and not check_C3(omega).ok):
                result.skipped += 1
                continue
            report = generate_sequence_topology(omega)
            failure = report.family_verdict()
            if not failure.ok:
                result.snippet = seq_snippet(points, ideal, pairs, flags)
                result.replay = f"iconv axioms --class C {file_hint}"
                result.verdict.absorb(failure)
                return result
            result.verdict.record(True)
            continue
        points, seeds, close, cls = _net_sample(rng, drop, seed)
        if not _net_hypotheses(cls, drop, seed):
            result.skipped += 1
            continue
        cl = closure_from_class(cls)
        kv = kuratowski_check(cl)
        if target == "kuratowski":
            failure = kv
        else:
            if not kv.ok:
                result.skipped += 1
                continue
            failure = check_class_soundness(cls)
        if not failure.ok:
            result.snippet = net_snippet(points, seeds, close, seed)
            result.replay = f"iconv axioms --class M {file_hint}"
            result.verdict.absorb(failure)
            return result
        result.verdict.record(True)
    return result
