"""Line-oriented workspace files.

Each statement sits on one line as ``kind name ... = payload``; ``#`` starts
a comment. Objects may only refer to names defined on earlier lines. See
``docs/workspace.md`` for the grammar.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable

from .classgen import (
    ClassCatalog,
    NetClass,
    Triple,
    close_class,
    default_class_catalog,
)
from .directed import SHAPES, DirectedSet, chain, from_pairs, order_ideal_I0, product_directed, shape
from .epset import NatIdeal
from .errors import InputError, UnknownReference, ValidationError, WorkspaceSyntaxError
from .ideals import FiniteIdeal, principal_ideal, validate_ideal
from .netconv import IteratedFamily, Net, SubnetWitness, validate_family, validate_subnet
from .seqconv import (
    PeriodicSequence,
    SeqClass,
    close_seq_class,
    constant_pairs,
    default_catalog,
    parse_sequence,
)
from .topology import FiniteTopology, discrete, indiscrete, validate_topology

KINDS = (
    "space", "topology", "directed", "ideal", "ideal-nat", "sequence", "net",
    "subnet", "seqclass", "netclass", "family",
)


@dataclass
class Workspace:
    spaces: dict[str, tuple[str, ...]] = field(default_factory=dict)
    topologies: dict[str, tuple[str, FiniteTopology]] = field(default_factory=dict)
    directed: dict[str, DirectedSet] = field(default_factory=dict)
    ideals: dict[str, tuple[str, FiniteIdeal]] = field(default_factory=dict)
    nat_ideals: dict[str, NatIdeal] = field(default_factory=dict)
    sequences: dict[str, tuple[str, PeriodicSequence]] = field(default_factory=dict)
    nets: dict[str, tuple[str, Net]] = field(default_factory=dict)
    subnets: dict[str, tuple[str, SubnetWitness]] = field(default_factory=dict)
    seqclasses: dict[str, tuple[str, SeqClass]] = field(default_factory=dict)
    netclasses: dict[str, tuple[str, NetClass]] = field(default_factory=dict)
    families: dict[str, tuple[str, IteratedFamily]] = field(default_factory=dict)
    exhaustive: int | None = None
    seed: int = 0

    def summary(self) -> dict[str, int]:
        return {
            "spaces": len(self.spaces),
            "topologies": len(self.topologies),
            "directed sets": len(self.directed),
            "ideals": len(self.ideals),
            "ideals on N": len(self.nat_ideals),
            "sequences": len(self.sequences),
            "nets": len(self.nets),
            "subnets": len(self.subnets),
            "sequence classes": len(self.seqclasses),
            "net classes": len(self.netclasses),
            "families": len(self.families),
        }

    def topologies_on(self, space: str) -> list[tuple[str, FiniteTopology]]:
        return [(n, t) for n, (s, t) in self.topologies.items() if s == space]

    def ideals_on(self, directed: str) -> list[tuple[str, FiniteIdeal]]:
        return [(n, i) for n, (d, i) in self.ideals.items() if d == directed]

    def directed_name(self, d: DirectedSet) -> str:
        for name, other in self.directed.items():
            if other == d:
                return name
        return str(d)


# --- tokens ------------------------------------------------------------------

_TOKEN = re.compile(r"->|<=|[{}\[\]();,]|[^\s{}\[\]();,]+")


def tokenize(text: str) -> list[str]:
    return _TOKEN.findall(text)


def _braced_sets(tokens: list[str], line: int) -> list[list[str]]:
    """Parse ``{ {x y} {} ... }`` into a list of member lists."""
    if not tokens or tokens[0] != "{" or tokens[-1] != "}":
        raise WorkspaceSyntaxError(line, "expected a braced family such as { {} {a} }")
    out, current = [], None
    for tok in tokens[1:-1]:
        if tok == "{":
            if current is not None:
                raise WorkspaceSyntaxError(line, "nested braces deeper than a family of sets")
            current = []
        elif tok == "}":
            if current is None:
                raise WorkspaceSyntaxError(line, "unbalanced '}'")
            out.append(current)
            current = None
        elif current is None:
            raise WorkspaceSyntaxError(line, f"member {tok!r} outside any set")
        else:
            current.append(tok)
    if current is not None:
        raise WorkspaceSyntaxError(line, "unclosed '{'")
    return out


def _braced(tokens: list[str], line: int) -> list[str]:
    if len(tokens) < 2 or tokens[0] != "{" or tokens[-1] != "}" or "{" in tokens[1:-1] or "}" in tokens[1:-1]:
        raise WorkspaceSyntaxError(line, "expected a braced set such as {a b}")
    return tokens[1:-1]


def _bracketed(tokens: list[str], line: int) -> list[str]:
    if len(tokens) < 2 or tokens[0] != "[" or tokens[-1] != "]" or "[" in tokens[1:-1]:
        raise WorkspaceSyntaxError(line, "expected a bracketed list such as [a b]")
    return tokens[1:-1]


def _split_items(tokens: list[str]) -> list[list[str]]:
    items, cur = [], []
    for tok in tokens:
        if tok == ";":
            if cur:
                items.append(cur)
            cur = []
        else:
            cur.append(tok)
    if cur:
        items.append(cur)
    return items


# --- parser ------------------------------------------------------------------

class _Parser:
    def __init__(self) -> None:
        self.ws = Workspace()
        self.line = 0

    # reference helpers
    def _get(self, table: dict, name: str, kind: str):
        if name not in table:
            raise UnknownReference(f"{kind} {name}", self.line)
        return table[name]

    def _fail(self, obj: str, exc: Exception) -> ValidationError:
        return ValidationError(obj, str(exc), self.line)

    def _define(self, table: dict, kind: str, name: str, value) -> None:
        if name in table:
            raise WorkspaceSyntaxError(self.line, f"{kind} {name!r} is defined twice")
        table[name] = value

    def _directed_ref(self, name: str) -> DirectedSet:
        if name in self.ws.directed:
            return self.ws.directed[name]
        if name in SHAPES:
            return shape(name)
        raise UnknownReference(f"directed {name}", self.line)

    def _ideal_spec(self, tokens: list[str], directed: DirectedSet, dname: str, obj: str) -> FiniteIdeal:
        """`order`, `principal {..}`, an explicit family, or the name of a declared ideal."""
        if tokens == ["order"]:
            return order_ideal_I0(directed)
        if tokens and tokens[0] == "principal":
            members = _braced(tokens[1:], self.line)
            try:
                return principal_ideal(directed.elements, directed.mask(members))
            except InputError as e:
                raise self._fail(obj, e) from None
        if tokens and tokens[0] == "{":
            try:
                return validate_ideal(directed.elements, [directed.mask(m) for m in _braced_sets(tokens, self.line)])
            except InputError as e:
                raise self._fail(obj, e) from None
        if len(tokens) == 1:
            on, ideal = self._get(self.ws.ideals, tokens[0], "ideal")
            if self.ws.directed.get(on) != directed and on != dname:
                raise ValidationError(obj, f"ideal {tokens[0]} lives on {on}, not on {dname}", self.line)
            return ideal
        raise WorkspaceSyntaxError(self.line, f"cannot read ideal {' '.join(tokens)!r}")

    def parse(self, text: str) -> Workspace:
        for self.line, raw in enumerate(text.splitlines(), start=1):
            stripped = raw.split("#", 1)[0].strip()
            if not stripped:
                continue
            head, _, rest = stripped.partition(" ")
            if head == "exhaustive":
                self._exhaustive(rest.strip())
                continue
            if head == "seed":
                try:
                    self.ws.seed = int(rest.strip())
                except ValueError:
                    raise WorkspaceSyntaxError(self.line, "seed needs an integer") from None
                continue
            if head not in KINDS:
                raise WorkspaceSyntaxError(self.line, f"unknown statement {head!r}")
            if "=" not in rest:
                raise WorkspaceSyntaxError(self.line, f"{head} needs '= payload'")
            lhs, _, payload = rest.partition("=")
            words = lhs.split()
            if not words:
                raise WorkspaceSyntaxError(self.line, f"{head} needs a name")
            handler: Callable = getattr(self, "_" + head.replace("-", "_"))
            handler(words[0], words[1:], payload.strip())
        return self.ws

    def _exhaustive(self, arg: str) -> None:
        try:
            n = int(arg)
        except ValueError:
            raise WorkspaceSyntaxError(self.line, "exhaustive needs a point count") from None
        if not 1 <= n <= 3:
            raise ValidationError("exhaustive", "point count must be 1, 2 or 3", self.line)
        self.ws.exhaustive = n

    def _expect(self, words: list[str], pattern: list[str]) -> list[str]:
        """Match `on X`-style clauses; returns the referenced names in order."""
        if len(words) != len(pattern) * 2 or any(words[2 * k] != p for k, p in enumerate(pattern)):
            want = " ".join(f"{p} NAME" for p in pattern)
            raise WorkspaceSyntaxError(self.line, f"expected '{want}' before '='")
        return [words[2 * k + 1] for k in range(len(pattern))]

    # statements
    def _space(self, name: str, words: list[str], payload: str) -> None:
        self._expect(words, [])
        points = _braced(tokenize(payload), self.line)
        if len(set(points)) != len(points):
            raise ValidationError(name, "a point is listed twice", self.line)
        if not points:
            raise ValidationError(name, "a space needs at least one point", self.line)
        self._define(self.ws.spaces, "space", name, tuple(points))

    def _topology(self, name: str, words: list[str], payload: str) -> None:
        (space,) = self._expect(words, ["on"])
        points = self._get(self.ws.spaces, space, "space")
        tokens = tokenize(payload)
        if tokens == ["discrete"]:
            topo = discrete(points)
        elif tokens == ["indiscrete"]:
            topo = indiscrete(points)
        else:
            try:
                topo = validate_topology(points, _braced_sets(tokens, self.line))
            except InputError as e:
                raise self._fail(name, e) from None
        self._define(self.ws.topologies, "topology", name, (space, topo))

    def _directed(self, name: str, words: list[str], payload: str) -> None:
        self._expect(words, [])
        tokens = tokenize(payload)
        try:
            if tokens[:1] == ["chain"] and len(tokens) == 2 and tokens[1].isdigit():
                d = chain(int(tokens[1]))
            elif tokens[:1] == ["chain"]:
                d = chain(_bracketed(tokens[1:], self.line))
            elif tokens[:1] == ["shape"] and len(tokens) == 2:
                d = shape(tokens[1])
            elif tokens[:1] == ["order"]:
                end = tokens.index("]") if "]" in tokens else -1
                elements = _bracketed(tokens[1:end + 1], self.line)
                rel = _braced(tokens[end + 1:], self.line)
                pairs = []
                for r in rel:
                    lo, sep, hi = r.partition("<=")
                    if not sep:
                        raise WorkspaceSyntaxError(self.line, f"order pair {r!r} needs the form lo<=hi")
                    pairs.append((lo, hi))
                d = from_pairs(elements, pairs)
            elif tokens[:1] == ["product"]:
                d = product_directed([self._directed_ref(t) for t in tokens[1:] if t not in "(),"])
            else:
                raise WorkspaceSyntaxError(self.line, "directed sets are 'chain N', 'chain [..]', 'shape NAME', 'order [..] {lo<=hi ..}' or 'product A B ..'")
        except (WorkspaceSyntaxError, UnknownReference, ValidationError):
            raise
        except InputError as e:
            raise self._fail(name, e) from None
        self._define(self.ws.directed, "directed", name, d)

    def _ideal(self, name: str, words: list[str], payload: str) -> None:
        (dname,) = self._expect(words, ["on"])
        d = self._directed_ref(dname)
        ideal = self._ideal_spec(tokenize(payload), d, dname, name)
        self._define(self.ws.ideals, "ideal", name, (dname, ideal))

    def _ideal_nat(self, name: str, words: list[str], payload: str) -> None:
        self._expect(words, [])
        tokens = tokenize(payload)
        if tokens == ["fin"]:
            ideal = NatIdeal.fin()
        elif tokens[:2] == ["residue", "mod"] and len(tokens) >= 4 and tokens[3] == "classes":
            try:
                modulus = int(tokens[2])
                classes = [int(c) for c in _braced(tokens[4:], self.line)]
            except ValueError:
                raise WorkspaceSyntaxError(self.line, "residue parameters must be integers") from None
            try:
                ideal = NatIdeal.residue(modulus, classes)
            except InputError as e:
                raise self._fail(name, e) from None
        else:
            raise WorkspaceSyntaxError(self.line, "ideals on N are 'fin' or 'residue mod M classes {..}'")
        self._define(self.ws.nat_ideals, "ideal-nat", name, ideal)

    def _sequence_literal(self, text: str, points: tuple[str, ...], obj: str) -> PeriodicSequence:
        try:
            s = parse_sequence(text)
        except InputError as e:
            raise self._fail(obj, e) from None
        bad = s.range - set(points)
        if bad:
            raise ValidationError(obj, f"value {sorted(bad)[0]!r} is not a point of the space", self.line)
        return s

    def _sequence(self, name: str, words: list[str], payload: str) -> None:
        (space,) = self._expect(words, ["in"])
        points = self._get(self.ws.spaces, space, "space")
        self._define(self.ws.sequences, "sequence", name, (space, self._sequence_literal(payload, points, name)))

    def _net_values(self, d: DirectedSet, tokens: list[str], points: tuple[str, ...], obj: str) -> Net:
        values = _bracketed(tokens, self.line)
        if len(values) != len(d):
            raise ValidationError(obj, f"arity: {len(values)} values for {len(d)} indices", self.line)
        bad = set(values) - set(points)
        if bad:
            raise ValidationError(obj, f"value {sorted(bad)[0]!r} is not a point of the space", self.line)
        return Net(d, tuple(values))

    def _net(self, name: str, words: list[str], payload: str) -> None:
        dname, space = self._expect(words, ["on", "in"])
        d = self._directed_ref(dname)
        points = self._get(self.ws.spaces, space, "space")
        self._define(self.ws.nets, "net", name, (space, self._net_values(d, tokenize(payload), points, name)))

    def _subnet(self, name: str, words: list[str], payload: str) -> None:
        (dname,) = self._expect(words, ["of"])
        d = self._directed_ref(dname)
        tokens = tokenize(payload)
        if len(tokens) < 3 or tokens[1] != "theta":
            raise WorkspaceSyntaxError(self.line, "subnets are 'SOURCE theta [d1 d2 ..]'")
        e = self._directed_ref(tokens[0])
        targets = _bracketed(tokens[2:], self.line)
        if len(targets) != len(e):
            raise ValidationError(name, f"theta has {len(targets)} entries for {len(e)} indices", self.line)
        try:
            theta = tuple(d.index[t] for t in targets)
        except KeyError as k:
            raise ValidationError(name, f"theta value {k.args[0]!r} is not an element of {dname}", self.line) from None
        w = SubnetWitness(e, theta)
        try:
            validate_subnet(Net.constant(d, "_"), w)
        except InputError as err:
            raise self._fail(name, err) from None
        self._define(self.ws.subnets, "subnet", name, (dname, w))

    def _seqclass(self, name: str, words: list[str], payload: str) -> None:
        space, iname = self._expect(words, ["on", "with"])
        points = self._get(self.ws.spaces, space, "space")
        ideal = self._get(self.ws.nat_ideals, iname, "ideal-nat")
        pairs: set = set()
        close: set[str] = set()
        catalog = default_catalog(points)
        for item in [s.strip() for s in payload.split(";") if s.strip()]:
            if item == "constants":
                pairs |= constant_pairs(points)
            elif item.split()[0] == "closed":
                flags = item.replace("[", " ").replace("]", " ").split()[1:] or ["C1", "C2", "C3"]
                if set(flags) - {"C1", "C2", "C3"}:
                    raise WorkspaceSyntaxError(self.line, "closed takes any of C1 C2 C3")
                close |= set(flags)
            elif "->" in item:
                lhs, _, x = (p.strip() for p in item.partition("->"))
                if x not in points:
                    raise ValidationError(name, f"limit {x!r} is not a point of the space", self.line)
                if lhs == "all":
                    pairs |= {(s, x) for s in catalog.universe}
                elif lhs in self.ws.sequences:
                    pairs.add((self.ws.sequences[lhs][1], x))
                else:
                    pairs.add((self._sequence_literal(lhs, points, name), x))
            else:
                raise WorkspaceSyntaxError(self.line, f"cannot read class item {item!r}")
        omega = SeqClass.make(points, ideal, pairs)
        if close:
            # closing always adds the constant pairs
            omega = close_seq_class(omega, catalog, insertions="C2" in close, subsequences="C3" in close)
        self._define(self.ws.seqclasses, "seqclass", name, (space, omega))

    def _netclass(self, name: str, words: list[str], payload: str) -> None:
        (space,) = self._expect(words, ["on"])
        points = self._get(self.ws.spaces, space, "space")
        items = _split_items(tokenize(payload))
        catalog: ClassCatalog = default_class_catalog()
        if any(it == ["general"] for it in items):
            catalog = default_class_catalog(general=True)
        if items and items[0][:1] == ["topological"]:
            if len(items) != 1 or len(items[0]) != 2:
                raise WorkspaceSyntaxError(self.line, "use 'topological TOPOLOGY' on its own")
            tspace, topo = self._get(self.ws.topologies, items[0][1], "topology")
            if tspace != space:
                raise ValidationError(name, f"topology {items[0][1]} lives on {tspace}", self.line)
            self._define(self.ws.netclasses, "netclass", name, (space, NetClass.topological(topo, catalog)))
            return
        triples: set[Triple] = set()
        constants = False
        close = ""
        for item in items:
            if item == ["general"]:
                continue
            if item == ["constants"]:
                constants = True
            elif item[0] == "closed":
                close = "".join(item[1:]) or "abd"
                if set(close) - set("abd"):
                    raise WorkspaceSyntaxError(self.line, "closed takes a subset of the letters abd")
            elif "->" in item:
                k = item.index("->")
                if k != len(item) - 2:
                    raise WorkspaceSyntaxError(self.line, "a triple ends with '-> POINT'")
                triples.add(self._triple(item[:k], item[-1], points, name))
            else:
                raise WorkspaceSyntaxError(self.line, f"cannot read class item {' '.join(item)!r}")
        try:
            cls = NetClass.make(points, triples, catalog, constants=constants)
        except InputError as e:
            raise self._fail(name, e) from None
        if close:
            cls = close_class(cls, close, seed=self.ws.seed)
        self._define(self.ws.netclasses, "netclass", name, (space, cls))

    def _triple(self, lhs: list[str], limit: str, points, obj: str) -> Triple:
        if limit not in points:
            raise ValidationError(obj, f"limit {limit!r} is not a point of the space", self.line)
        if len(lhs) >= 2 and lhs[1] == "[":
            d = self._directed_ref(lhs[0])
            end = lhs.index("]")
            net = self._net_values(d, lhs[1:end + 1], points, obj)
            dname = lhs[0]
            ideal = self._ideal_spec(lhs[end + 1:], d, dname, obj)
        else:
            nspace, net = self._get(self.ws.nets, lhs[0], "net")
            d = net.dir
            dname = self.ws.directed_name(d)
            ideal = self._ideal_spec(lhs[1:], d, dname, obj)
        if not ideal.nontrivial:
            raise ValidationError(obj, "triples need a nontrivial ideal", self.line)
        return Triple(net, ideal.top, limit)

    def _family(self, name: str, words: list[str], payload: str) -> None:
        dname, space, iname = self._expect(words, ["on", "in", "with"])
        d = self._directed_ref(dname)
        points = self._get(self.ws.spaces, space, "space")
        ideal_d = self._ideal_spec([iname], d, dname, name)
        rows = _split_items(tokenize(payload))
        if len(rows) != len(d):
            raise ValidationError(name, f"{len(rows)} rows for {len(d)} outer indices", self.line)
        inner, table, ideals = [], [], []
        for row in rows:
            if "[" not in row:
                raise WorkspaceSyntaxError(self.line, "rows are 'DIRECTED [values] IDEAL'")
            e = self._directed_ref(row[0])
            end = row.index("]")
            net = self._net_values(e, row[1:end + 1], points, name)
            inner.append(e)
            table.append(net.values)
            ideals.append(self._ideal_spec(row[end + 1:], e, row[0], name))
        fam = IteratedFamily(d, tuple(inner), tuple(table), ideal_d, tuple(ideals))
        try:
            validate_family(fam)
        except InputError as e:
            raise self._fail(name, e) from None
        self._define(self.ws.families, "family", name, (space, fam))


def parse_workspace(text: str) -> Workspace:
    return _Parser().parse(text)


def load_workspace(path: str) -> Workspace:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    return parse_workspace(text)
