"""Static grammar analyses, run automatically whenever a grammar is loaded.

Cycle detection works over graphs of category symbols: the left-corner graph
for left recursion, the precedence digraph for LP constraints, and the
reference graph for alias definitions.  Feature structures are deliberately
ignored when building these graphs, so left-recursion findings are a
conservative approximation.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import networkx as nx

from .errors import SourceLoc

MAX_CYCLE_FINDINGS = 100

KIND_LEFT_RECURSION = "left_recursion"
KIND_LP_CYCLE = "lp_cycle"
KIND_ALIAS_CYCLE = "alias_cycle"
KIND_UNDEFINED = "undefined_symbol"
KIND_UNREACHABLE = "unreachable_symbol"


@dataclass(frozen=True)
class Finding:
    severity: str  # "error" | "warning"
    kind: str
    witness: tuple[str, ...]
    message: str
    locations: tuple[SourceLoc, ...] = field(default=(), compare=False)

    def to_json_dict(self):
        return {
            "severity": self.severity,
            "kind": self.kind,
            "witness": list(self.witness),
            "message": self.message,
            "locations": [
                {"file": loc.file, "line": loc.line} for loc in self.locations
            ],
        }


@dataclass
class CheckReport:
    findings: list

    def __post_init__(self):
        self.findings = sorted(self.findings, key=lambda f: (f.kind, f.witness))

    @property
    def errors(self):
        return [f for f in self.findings if f.severity == "error"]

    @property
    def warnings(self):
        return [f for f in self.findings if f.severity == "warning"]

    def to_text(self):
        if not self.findings:
            return "no findings"
        return "\n".join(
            f"{f.severity}: {f.message}" for f in self.findings
        )

    def to_json_dict(self):
        return {"findings": [f.to_json_dict() for f in self.findings]}

    def to_json(self):
        return json.dumps(self.to_json_dict(), ensure_ascii=False, sort_keys=True)


def _canonical_cycle(cycle):
    """Rotate a cycle so the lexicographically smallest symbol comes first."""
    k = cycle.index(min(cycle))
    return tuple(cycle[k:] + cycle[:k])


def _cycle_findings(graph, kind, message_fmt, locations_for):
    findings = []
    cycles = nx.simple_cycles(graph)
    for cycle in itertools.islice(cycles, MAX_CYCLE_FINDINGS):
        witness = _canonical_cycle(cycle)
        findings.append(
            Finding(
                "error",
                kind,
                witness,
                message_fmt.format(" -> ".join(witness + (witness[0],))),
                tuple(locations_for(witness)),
            )
        )
    # simple_cycles order is unspecified; reports are deterministic.
    findings.sort(key=lambda f: f.witness)
    return findings


def nullable_symbols(grammar):
    """Category symbols that can derive the empty string."""
    nullable = set()
    rules = grammar.resolved_rules()
    changed = True
    while changed:
        changed = False
        for rule in rules:
            if rule.lhs.symbol in nullable:
                continue
            if all(
                item.kind == "empty"
                or item.optional
                or (item.kind == "category" and item.symbol in nullable)
                for item in rule.rhs
            ):
                nullable.add(rule.lhs.symbol)
                changed = True
    return nullable


def left_corner_graph(grammar):
    """Directed edges lhs -> c for every category c that can begin lhs.

    Walks each right-hand side from the left: explicit empty constituents
    are transparent, every optional category contributes an edge and is
    skipped over, and the walk continues past a category that can itself
    derive the empty string.
    """
    nullable = nullable_symbols(grammar)
    edges = set()
    locations = {}
    for rule in grammar.resolved_rules():
        lhs = rule.lhs.symbol
        for item in rule.rhs:
            if item.kind == "empty":
                continue
            if item.kind == "terminal":
                if not item.optional:
                    break
                continue
            edge = (lhs, item.symbol)
            edges.add(edge)
            locations.setdefault(edge, rule.loc)
            if not item.optional and item.symbol not in nullable:
                break
    return edges, locations


def check_left_recursion(grammar):
    """One finding per elementary cycle in the left-corner graph."""
    edges, locations = left_corner_graph(grammar)
    graph = nx.DiGraph(sorted(edges))

    def locs(witness):
        out = []
        cycle = list(witness) + [witness[0]]
        for a, b in zip(cycle, cycle[1:]):
            loc = locations.get((a, b))
            if loc and loc not in out:
                out.append(loc)
        return out

    return _cycle_findings(
        graph, KIND_LEFT_RECURSION, "possible left recursion: {}", locs
    )


def check_lp_cycles(lp):
    """Cycles in the precedence digraph (LP constraints are transitive)."""
    graph = nx.DiGraph()
    locations = {}
    for c in lp:
        graph.add_edge(c.left, c.right)
        locations.setdefault((c.left, c.right), c.loc)

    def locs(witness):
        out = []
        cycle = list(witness) + [witness[0]]
        for a, b in zip(cycle, cycle[1:]):
            loc = locations.get((a, b))
            if loc and loc not in out:
                out.append(loc)
        return out

    return _cycle_findings(
        graph, KIND_LP_CYCLE, "LP constraints form a precedence cycle: {}", locs
    )


def check_alias_cycles(aliases):
    """Cycles in the alias reference graph."""
    alias_names = {a.name for a in aliases}
    graph = nx.DiGraph()
    locations = {}
    for a in aliases:
        graph.add_node(a.name)
        if a.expansion.symbol in alias_names:
            graph.add_edge(a.name, a.expansion.symbol)
            locations.setdefault((a.name, a.expansion.symbol), a.loc)
        if a.expansion.symbol == a.name:
            graph.add_edge(a.name, a.name)
            locations.setdefault((a.name, a.name), a.loc)

    def locs(witness):
        out = []
        cycle = list(witness) + [witness[0]]
        for x, y in zip(cycle, cycle[1:]):
            loc = locations.get((x, y))
            if loc and loc not in out:
                out.append(loc)
        return out

    return _cycle_findings(
        graph, KIND_ALIAS_CYCLE, "alias definitions form a cycle: {}", locs
    )


def derivation_cycles(grammar):
    """Cycles A =>+ A over the same span (unit or nullable-sibling chains).

    Such grammars admit infinitely many readings for one string; the chart
    engine refuses them up front instead of growing the chart forever.
    """
    nullable = nullable_symbols(grammar)
    graph = nx.DiGraph()
    for rule in grammar.resolved_rules():
        items = [i for i in rule.rhs if i.kind != "empty"]
        for k, item in enumerate(items):
            if item.kind != "category":
                continue
            others = items[:k] + items[k + 1 :]
            if all(
                o.optional or (o.kind == "category" and o.symbol in nullable)
                for o in others
            ):
                graph.add_edge(rule.lhs.symbol, item.symbol)
    return [
        _canonical_cycle(c)
        for c in itertools.islice(nx.simple_cycles(graph), MAX_CYCLE_FINDINGS)
    ]


def check_wellformedness(grammar, preterminals=frozenset()):
    """Warnings for undefined and unreachable nonterminals.

    ``preterminals`` names the categories introduced by lexicon interface
    rules, which count as defined.  Pass None when that set is unknown;
    the undefined-nonterminal check is then skipped.
    """
    rules = grammar.resolved_rules()
    defined = {}
    referenced = {}
    for rule in rules:
        defined.setdefault(rule.lhs.symbol, rule.loc)
        for item in rule.rhs:
            if item.kind == "category":
                referenced.setdefault(item.symbol, rule.loc)
    findings = []
    if preterminals is not None:
        known = set(defined) | set(preterminals)
        for symbol in sorted(set(referenced) - known):
            findings.append(
                Finding(
                    "warning",
                    KIND_UNDEFINED,
                    (symbol,),
                    f"nonterminal {symbol!r} is referenced but never defined",
                    (referenced[symbol],),
                )
            )
    # Reachability from the start symbol over defining rules.
    reachable = {grammar.start}
    frontier = [grammar.start]
    by_lhs = {}
    for rule in rules:
        by_lhs.setdefault(rule.lhs.symbol, []).append(rule)
    while frontier:
        sym = frontier.pop()
        for rule in by_lhs.get(sym, ()):
            for item in rule.rhs:
                if item.kind == "category" and item.symbol not in reachable:
                    reachable.add(item.symbol)
                    frontier.append(item.symbol)
    for symbol in sorted(set(defined) - reachable):
        findings.append(
            Finding(
                "warning",
                KIND_UNREACHABLE,
                (symbol,),
                f"nonterminal {symbol!r} is defined but unreachable from "
                f"{grammar.start!r}",
                (defined[symbol],),
            )
        )
    return findings


def run_checks(grammar, preterminals=None):
    """All static checks; called automatically when a grammar is loaded."""
    findings = []
    findings.extend(check_left_recursion(grammar))
    findings.extend(check_lp_cycles(grammar.lp))
    findings.extend(check_alias_cycles(grammar.aliases))
    findings.extend(check_wellformedness(grammar, preterminals))
    return CheckReport(findings)
