"""Command-line front door: ``iconv SUBCOMMAND ... FILE``.

Exit status is 0 when every check passes (bounded passes included), 1 when
some check fails, and 2 for malformed input.
"""

from __future__ import annotations

import argparse
import json
import shlex
import sys
import time
from dataclasses import dataclass, field

from .classgen import (
    analyse_class,
    closure_from_class,
    kuratowski_check,
    topology_from_closure,
)
from .directed import order_ideal_I0
from .epset import natural_density, parse_epset
from .errors import IconvError, InputError, NotAClosureOperator, UnknownReference
from .fuzz import DROPS, TARGETS, fuzz
from .netconv import closure_side, net_i_cluster_points, net_i_converges, net_i_limits, check_cluster_closure
from .seqconv import (
    check_C1,
    check_C2,
    check_C3,
    generate_sequence_topology,
    seq_i_cluster_points,
    seq_i_converges,
    seq_i_limits,
)
from .suites import SUITE_IDS, run_suite
from .verdict import FAIL, Verdict
from .workspace import Workspace, load_workspace

# nesting shown in reports; failing parts are always shown in full
HUMAN_DEPTH = 2
HUMAN_MAX_PARTS = 12
JSON_DEPTH = 3


@dataclass
class RunReport:
    command: str
    facts: list[tuple[str, str]] = field(default_factory=list)
    sections: list[tuple[str, list[Verdict]]] = field(default_factory=list)
    replay: str | None = None
    failed: bool = False
    elapsed: float | None = None
    snippet: str | None = None

    def fact(self, key: str, value) -> None:
        self.facts.append((key, str(value)))

    @property
    def exit_code(self) -> int:
        if self.failed or any(v.status == FAIL for _, vs in self.sections for v in vs):
            return 1
        return 0

    def to_dict(self) -> dict:
        out: dict = {
            "command": self.command,
            "facts": {k: v for k, v in self.facts},
            "sections": [{"name": name, "verdicts": [_trim(v.to_dict(), JSON_DEPTH) for v in vs]} for name, vs in self.sections],
            "exit": self.exit_code,
        }
        if self.snippet is not None:
            out["snippet"] = self.snippet
        if self.replay is not None:
            out["replay"] = self.replay
        if self.elapsed is not None:
            out["elapsed_s"] = round(self.elapsed, 3)
        return out

    def render(self) -> str:
        lines = [f"command: {self.command}"]
        lines += [f"{k}: {v}" for k, v in self.facts]
        for name, vs in self.sections:
            lines.append(f"== {name}")
            for v in vs:
                _render_verdict(v, 0, lines)
        if self.snippet is not None:
            lines.append("-- workspace snippet")
            lines.extend(self.snippet.rstrip("\n").splitlines())
            lines.append("--")
        if self.elapsed is not None:
            lines.append(f"elapsed: {self.elapsed:.2f}s")
        lines.append(f"result: {'fail' if self.exit_code else 'pass'} (exit {self.exit_code})")
        if self.replay is not None and self.exit_code:
            lines.append(f"replay: {self.replay}")
        return "\n".join(lines) + "\n"


def _trim(d: dict, depth: int) -> dict:
    parts = d.get("parts")
    if not parts:
        return d
    out = dict(d)
    if depth <= 1:
        failing = [_trim(p, 1) for p in parts if p["status"] == FAIL]
        out["parts"] = failing
        out["parts_omitted"] = len(parts) - len(failing)
        if not failing:
            del out["parts"]
    else:
        out["parts"] = [_trim(p, depth - 1) for p in parts]
    return out


def _render_verdict(v: Verdict, level: int, lines: list[str]) -> None:
    pad = "  " * level
    label = {"pass": "PASS", "bounded-pass": "BOUNDED", "fail": "FAIL"}[v.status]
    extra = f" ({v.failures} failing)" if v.failures else ""
    lines.append(f"{pad}{label:<8} {v.check}  [{v.checked} checks{extra}]")
    if v.note:
        lines.append(f"{pad}         note: {v.note}")
    for w in v.witnesses:
        lines.append(f"{pad}         witness: {json.dumps(w, sort_keys=True, ensure_ascii=False)}")
    hidden = 0
    show_passing = level + 1 < HUMAN_DEPTH and len(v.parts) <= HUMAN_MAX_PARTS
    for p in v.parts:
        if show_passing or p.status == FAIL:
            _render_verdict(p, level + 1, lines)
        else:
            hidden += 1
    if hidden:
        lines.append(f"{pad}         (+{hidden} passing sub-checks)")


# --- commands --------------------------------------------------------------------------

def _load(args) -> Workspace:
    return load_workspace(args.file)


def _lookup(table: dict, name: str, kind: str):
    if name not in table:
        raise UnknownReference(f"{kind} {name}")
    return table[name]


def _subject(ws: Workspace, args):
    """The sequence or net named on the command line, with its topology and ideal."""
    tspace, topology = _lookup(ws.topologies, args.topology, "topology")
    if args.seq:
        space, s = _lookup(ws.sequences, args.seq, "sequence")
        ideal = _lookup(ws.nat_ideals, args.ideal, "ideal-nat")
        kind = "seq"
    else:
        space, s = _lookup(ws.nets, args.net, "net")
        if args.ideal == "order":
            ideal = order_ideal_I0(s.dir)
        else:
            on, ideal = _lookup(ws.ideals, args.ideal, "ideal")
            if ws.directed.get(on) != s.dir:
                raise InputError(f"ideal {args.ideal} lives on {on}, not on the index set of {args.net}")
        kind = "net"
    if tspace != space:
        raise InputError(f"topology {args.topology} lives on {tspace}, not on {space}")
    return kind, s, topology, ideal


def _points(topology, pts) -> str:
    return topology.render(topology.mask(pts))


def cmd_validate(args, report: RunReport) -> None:
    ws = _load(args)
    for kind, count in ws.summary().items():
        report.fact(kind, count)


def cmd_converge(args, report: RunReport) -> None:
    kind, s, topology, ideal = _subject(_load(args), args)
    limits = seq_i_limits(s, topology, ideal) if kind == "seq" else net_i_limits(s, ideal, topology)
    report.fact("limits", _points(topology, limits))
    if args.to is not None:
        if args.to not in topology.index:
            raise InputError(f"{args.to!r} is not a point of the space")
        ok = seq_i_converges(s, topology, ideal, args.to) if kind == "seq" else net_i_converges(s, ideal, topology, args.to)
        v = Verdict(f"converges to {args.to}")
        v.record(ok, {"limits": _points(topology, limits)})
        report.sections.append(("convergence", [v]))


def cmd_cluster(args, report: RunReport) -> None:
    kind, s, topology, ideal = _subject(_load(args), args)
    if kind == "seq":
        report.fact("cluster points", _points(topology, seq_i_cluster_points(s, topology, ideal)))
        return
    report.fact("cluster points", _points(topology, net_i_cluster_points(s, ideal, topology)))
    report.fact("closure characterization", _points(topology, closure_side(s, ideal, topology)))
    if ideal.nontrivial:
        report.sections.append(("agreement", [check_cluster_closure(s, ideal, topology)]))


def _class(ws: Workspace, name: str):
    if name in ws.seqclasses:
        return "seq", ws.seqclasses[name][1]
    if name in ws.netclasses:
        return "net", ws.netclasses[name][1]
    raise UnknownReference(f"class {name}")


def _subset(points, mask: int) -> str:
    return "{" + " ".join(p for i, p in enumerate(points) if mask >> i & 1) + "}"


def cmd_gentopo(args, report: RunReport) -> None:
    kind, cls = _class(_load(args), args.cls)
    if kind == "seq":
        gen = generate_sequence_topology(cls, check_axioms=False)
        report.sections.append(("generated family", [gen.family_verdict()]))
        topology = gen.topology
        if topology is None:
            report.fact("family", "{ " + " ".join(_subset(cls.points, g) for g in gen.family) + " }")
    else:
        try:
            topology = topology_from_closure(closure_from_class(cls))
        except NotAClosureOperator:
            topology = None
            report.sections.append(("closure operator", [kuratowski_check(closure_from_class(cls))]))
    if topology is not None:
        report.fact("opens", topology)
        if args.figures:
            from .figures import open_set_lattice

            report.fact("figure", open_set_lattice(topology, args.figures))
    report.replay = f"iconv axioms --class {args.cls} {shlex.quote(args.file)}"


def cmd_axioms(args, report: RunReport) -> None:
    ws = _load(args)
    kind, cls = _class(ws, args.cls)
    if kind == "seq":
        gen = generate_sequence_topology(cls, check_axioms=False)
        report.sections.append(("class conditions", [check_C1(cls), check_C2(cls), check_C3(cls)]))
        report.sections.append(("generated family", [gen.family_verdict()]))
    else:
        checks = analyse_class(cls, seed=ws.seed)
        report.sections.append(("class conditions", checks.conditions))
        report.sections.append(("closure and topology", [v for v in (checks.kuratowski, checks.soundness, checks.completeness) if v]))
        if checks.note:
            report.fact("note", checks.note)
    report.replay = report.command


def cmd_theorems(args, report: RunReport) -> None:
    ws = _load(args)
    results = run_suite(ws, args.suite)
    for sid, verdicts in results:
        report.sections.append((f"suite {sid}", verdicts))
    if args.figures:
        from .figures import suite_chart

        report.fact("figure", suite_chart(results, args.figures))
    report.replay = report.command


def cmd_density(args, report: RunReport) -> None:
    report.fact("density", natural_density(parse_epset(args.set)))


def cmd_fuzz(args, report: RunReport) -> None:
    hint = args.file or "counterexample.ws"
    result = fuzz(args.target, args.drop, args.seed, args.budget, file_hint=shlex.quote(hint))
    report.fact("outcome", result.summary())
    report.fact("samples", result.tried)
    report.fact("skipped", result.skipped)
    if result.found:
        report.failed = True
        report.snippet = result.snippet
        report.replay = result.replay
        report.sections.append(("counterexample", [result.verdict]))
        if args.file:
            with open(args.file, "w", encoding="utf-8") as fh:
                fh.write(result.snippet)
            report.fact("written", args.file)


# --- parser ----------------------------------------------------------------------------

def _subject_args(p: argparse.ArgumentParser, with_to: bool) -> None:
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--seq", help="sequence name")
    which.add_argument("--net", help="net name")
    p.add_argument("--topology", required=True)
    p.add_argument("--ideal", required=True, help="ideal name ('order' for the order ideal of a net)")
    if with_to:
        p.add_argument("--to", help="point to test; exit 1 when the subject does not converge to it")
    p.add_argument("file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="iconv", description="Finite-model workbench for ideal convergence.")
    parser.add_argument("--json", action="store_true", help="emit one JSON document instead of text")
    parser.add_argument("--timing", action="store_true", help="include wall-clock time in the report")
    parser.add_argument("--figures", metavar="DIR", help="write plots for gentopo and theorems into DIR")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and validate a workspace")
    p.add_argument("file")
    p.set_defaults(run=cmd_validate)

    p = sub.add_parser("converge", help="ideal limits of a sequence or net")
    _subject_args(p, with_to=True)
    p.set_defaults(run=cmd_converge)

    p = sub.add_parser("cluster", help="ideal cluster points of a sequence or net")
    _subject_args(p, with_to=False)
    p.set_defaults(run=cmd_cluster)

    p = sub.add_parser("gentopo", help="topology generated by a convergence class")
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("file")
    p.set_defaults(run=cmd_gentopo)

    p = sub.add_parser("axioms", help="check a class's closure conditions")
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("file")
    p.set_defaults(run=cmd_axioms)

    p = sub.add_parser("theorems", help="run a theorem suite over a workspace")
    p.add_argument("--suite", required=True, choices=SUITE_IDS + ("all",))
    p.add_argument("file")
    p.set_defaults(run=cmd_theorems)

    p = sub.add_parser("density", help="natural density of an eventually periodic set")
    p.add_argument("--set", required=True, help='e.g. "mod 2 {0}"')
    p.set_defaults(run=cmd_density)

    p = sub.add_parser("fuzz", help="seeded search for a counterexample with one hypothesis dropped")
    p.add_argument("--target", required=True, choices=TARGETS)
    p.add_argument("--drop", default="none", choices=DROPS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=50)
    p.add_argument("file", nargs="?", help="write the counterexample workspace here")
    p.set_defaults(run=cmd_fuzz)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    report = RunReport("iconv " + shlex.join(argv))
    start = time.perf_counter()
    try:
        args.run(args, report)
    except (InputError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except IconvError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    if args.timing:
        report.elapsed = time.perf_counter() - start
    if args.json:
        sys.stdout.write(json.dumps(report.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write(report.render())
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
