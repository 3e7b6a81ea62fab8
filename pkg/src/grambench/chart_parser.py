"""Bottom-up chart parser for ID/LP and GPSG grammars.

Rules are interpreted with an unordered right-hand side: an active edge may
consume any member of its remaining multiset next, provided every linear
precedence constraint holds between the new child's label and the labels of
the children already consumed.  DCG grammars are also accepted and parsed
with the ordered reading of their right-hand sides, which makes the engine
directly comparable with the top-down one.

The chart persists after parsing: it feeds tracing, fragment diagnostics
and the workbench's chart inspector.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import EngineError
from .featstruct import (
    FeatStruct,
    Renamer,
    Var,
    normalize_coindices,
    render_fs,
    rename_variables,
    resolve,
    unify,
)
from .results import ParseTree

WORD = "word"
LEX = "lex"
RULE = "rule"


@dataclass(frozen=True)
class Edge:
    id: int
    start: int
    end: int
    label: str
    features: object = FeatStruct.EMPTY
    state: str = "passive"  # "passive" | "active"
    kind: str = RULE  # "word" | "lex" | "rule"
    variant_id: int | None = None
    needed: tuple[int, ...] = ()  # item positions still required (active only)
    consumed: tuple[int, ...] = ()  # child edge ids in consumption order
    consumed_items: tuple[int, ...] = ()  # item position matched per child
    env: dict = field(default=None, compare=False, repr=False)
    suffix: int = 0  # variable renaming scope of this rule instance

    @property
    def is_passive(self):
        return self.state == "passive"

    def span(self):
        return (self.start, self.end)

    def to_json_dict(self):
        return {
            "id": self.id,
            "from": self.start,
            "to": self.end,
            "label": self.label,
            "state": self.state,
            "kind": self.kind,
            "features": render_fs(normalize_coindices(resolve(self.features, self.env or {}))),
            "children": list(self.consumed),
            "needed": len(self.needed),
        }


class Chart:
    """All edges over one token list, indexed for extension and inspection."""

    def __init__(self, tokens):
        self.tokens = tuple(tokens)
        self.edges = []
        self._keys = set()
        self._passive_by_start = {}
        self._active_by_end = {}
        self._next_id = 0

    def __len__(self):
        return len(self.edges)

    def edge(self, edge_id):
        return self.edges[edge_id]

    def passive_edges(self):
        return [e for e in self.edges if e.is_passive]

    def add(self, **kw):
        """Insert an edge unless an equivalent one exists.  Returns it or None."""
        key = self._dedup_key(kw)
        if key in self._keys:
            return None
        self._keys.add(key)
        edge = Edge(id=self._next_id, **kw)
        self._next_id += 1
        self.edges.append(edge)
        if edge.is_passive:
            self._passive_by_start.setdefault(edge.start, []).append(edge)
        else:
            self._active_by_end.setdefault(edge.end, []).append(edge)
        return edge

    @staticmethod
    def _dedup_key(kw):
        state = kw.get("state", "passive")
        features = kw.get("features", FeatStruct.EMPTY)
        canonical = render_fs(
            normalize_coindices(resolve(features, kw.get("env") or {}))
        )
        return (
            state,
            kw["start"],
            kw["end"],
            kw["label"],
            kw.get("kind", RULE),
            kw.get("variant_id"),
            canonical,
            kw.get("needed", ()),
            kw.get("consumed", ()),
        )

    def passive_at(self, start):
        return self._passive_by_start.get(start, ())

    def active_ending_at(self, end):
        return self._active_by_end.get(end, ())

    def to_json_dict(self):
        return {
            "tokens": list(self.tokens),
            "edges": [e.to_json_dict() for e in self.edges],
        }


@dataclass(frozen=True)
class ChartEvent:
    seq: int
    edge: Edge

    def to_json_dict(self):
        d = self.edge.to_json_dict()
        d["seq"] = self.seq
        return d


def chart_trace(chart, labels=None, span=None):
    """Edge insertions in order, optionally filtered by label and exact span."""
    events = []
    for seq, edge in enumerate(chart.edges):
        if labels is not None and edge.label not in labels:
            continue
        if span is not None and (edge.start, edge.end) != tuple(span):
            continue
        events.append(ChartEvent(seq, edge))
    return events


@dataclass
class ChartParse:
    readings: list  # list[ParseTree]
    chart: Chart


def _lp_allows(closure, consumed_labels, new_label):
    # The new child follows all consumed ones; reject if it must precede any.
    return all((new_label, prev) not in closure for prev in consumed_labels)


class _Engine:
    def __init__(self, grammar, lexicon):
        if grammar.formalism == "LFG":
            raise EngineError(
                "the chart engine does not process LFG grammars; use the "
                "top-down engine"
            )
        from .checks import derivation_cycles

        cycles = derivation_cycles(grammar)
        if cycles:
            witness = " -> ".join(cycles[0] + (cycles[0][0],))
            raise EngineError(
                f"grammar derives a category from itself over the same span "
                f"({witness}); the reading set would be infinite"
            )
        self.grammar = grammar
        self.lexicon = lexicon
        self.ordered = grammar.formalism == "DCG"
        self.closure = grammar.lp_closure() if not self.ordered else frozenset()
        self.variants = grammar.variants()
        self._suffix = 0
        # Index variants by the keys that may start them bottom-up.
        self.start_index = {}
        for v in self.variants:
            positions = range(len(v.items)) if not self.ordered else [0]
            for p in positions:
                if p >= len(v.items):
                    continue
                item = v.items[p]
                key = (
                    ("cat", item.symbol)
                    if item.kind == "category"
                    else ("term", item.symbol)
                )
                self.start_index.setdefault(key, []).append((v, p))

    def fresh_suffix(self):
        self._suffix += 1
        return self._suffix

    def instantiate(self, variant):
        """Fresh env for one application of a rule; applies its equations."""
        suffix = self.fresh_suffix()
        renamer = Renamer(suffix)
        env = {}
        for var, value in variant.rule.equations:
            r = unify(Var(renamer(var)), rename_variables(value, renamer), env)
            if not r:
                return None, None
            env = r.env
        return env, suffix

    def item_features(self, variant, position, suffix):
        item = variant.items[position]
        return rename_variables(item.features, Renamer(suffix))

    def child_features(self, edge):
        """A passive edge's features, renamed apart from any rule instance."""
        feats = resolve(edge.features, edge.env or {})
        return rename_variables(feats, Renamer(self.fresh_suffix()))

    def run(self, chart, agenda):
        while agenda:
            edge = agenda.popleft()
            if edge.is_passive:
                for active in list(chart.active_ending_at(edge.start)):
                    self.extend(chart, agenda, active, edge)
                for variant, position in self.start_index.get(
                    ("cat", edge.label) if edge.kind != WORD else ("term", edge.label),
                    (),
                ):
                    self.start(chart, agenda, variant, position, edge)
            else:
                for passive in list(chart.passive_at(edge.end)):
                    if passive.is_passive:
                        self.extend(chart, agenda, edge, passive)

    def start(self, chart, agenda, variant, position, passive):
        item = variant.items[position]
        if item.kind == "terminal":
            if passive.kind != WORD or passive.label != item.symbol:
                return
        elif passive.kind == WORD:
            return
        env, suffix = self.instantiate(variant)
        if env is None:
            return
        if item.kind == "category":
            r = unify(
                self.item_features(variant, position, suffix),
                self.child_features(passive),
                env,
            )
            if not r:
                return
            env = r.env
        needed = tuple(p for p in range(len(variant.items)) if p != position)
        self.place(chart, agenda, variant, suffix, env, passive.start, passive.end,
                   needed, (passive.id,), (position,))

    def extend(self, chart, agenda, active, passive):
        variant = self.variants[active.variant_id]
        if self.ordered:
            candidates = active.needed[:1]
        else:
            candidates = active.needed
        consumed_labels = [
            chart.edge(i).label
            for i, p in zip(active.consumed, active.consumed_items)
            if variant.items[p].kind == "category"
        ]
        for position in candidates:
            item = variant.items[position]
            if item.kind == "terminal":
                if passive.kind != WORD or passive.label != item.symbol:
                    continue
                env = active.env
            else:
                if passive.kind == WORD or passive.label != item.symbol:
                    continue
                if not _lp_allows(self.closure, consumed_labels, passive.label):
                    continue
                r = unify(
                    self.item_features(variant, position, active.suffix),
                    self.child_features(passive),
                    active.env,
                )
                if not r:
                    continue
                env = r.env
            needed = tuple(p for p in active.needed if p != position)
            self.place(
                chart,
                agenda,
                variant,
                active.suffix,
                env,
                active.start,
                passive.end,
                needed,
                active.consumed + (passive.id,),
                active.consumed_items + (position,),
            )

    def place(self, chart, agenda, variant, suffix, env, start, end, needed,
              consumed, consumed_items):
        if needed:
            edge = chart.add(
                start=start,
                end=end,
                label=variant.lhs.symbol,
                features=rename_variables(variant.lhs.features, Renamer(suffix)),
                state="active",
                kind=RULE,
                variant_id=variant.id,
                needed=needed,
                consumed=consumed,
                consumed_items=consumed_items,
                env=env,
                suffix=suffix,
            )
        else:
            lhs_features = resolve(
                rename_variables(variant.lhs.features, Renamer(suffix)), env
            )
            edge = chart.add(
                start=start,
                end=end,
                label=variant.lhs.symbol,
                features=lhs_features,
                state="passive",
                kind=RULE,
                variant_id=variant.id,
                consumed=consumed,
                consumed_items=consumed_items,
                env=None,
                suffix=suffix,
            )
        if edge is not None:
            agenda.append(edge)

    def seed(self, chart, agenda):
        for i, token in enumerate(chart.tokens):
            word = chart.add(
                start=i, end=i + 1, label=token, state="passive", kind=WORD
            )
            if word is not None:
                agenda.append(word)
            else:
                word = next(
                    e for e in chart.passive_at(i) if e.kind == WORD and e.label == token
                )
            for cat in self.lexicon.categories(token):
                lex = chart.add(
                    start=i,
                    end=i + 1,
                    label=cat.symbol,
                    features=cat.features,
                    state="passive",
                    kind=LEX,
                    consumed=(word.id,),
                )
                if lex is not None:
                    agenda.append(lex)
        # Empty-expansion rules yield passive edges at every position.
        for variant in self.variants:
            if variant.items:
                continue
            env, suffix = self.instantiate(variant)
            if env is None:
                continue
            features = resolve(
                rename_variables(variant.lhs.features, Renamer(suffix)), env
            )
            for i in range(len(chart.tokens) + 1):
                edge = chart.add(
                    start=i,
                    end=i,
                    label=variant.lhs.symbol,
                    features=features,
                    state="passive",
                    kind=RULE,
                    variant_id=variant.id,
                    suffix=suffix,
                )
                if edge is not None:
                    agenda.append(edge)


def _build_tree(chart, engine, edge, env, annotations=()):
    """Re-derive an edge into a tree, sharing one environment per reading."""
    if edge.kind == WORD:
        return ParseTree(edge.label, FeatStruct.EMPTY, (), edge.span()), env
    if edge.kind == LEX:
        child = ParseTree(
            chart.edge(edge.consumed[0]).label, FeatStruct.EMPTY, (),
            edge.span(),
        )
        feats = rename_variables(edge.features, Renamer(engine.fresh_suffix()))
        return ParseTree(edge.label, feats, (child,), edge.span(), annotations), env
    variant = engine.variants[edge.variant_id]
    suffix = engine.fresh_suffix()
    renamer = Renamer(suffix)
    for var, value in variant.rule.equations:
        r = unify(Var(renamer(var)), rename_variables(value, renamer), env)
        if not r:
            raise EngineError(f"edge {edge.id} no longer re-derives (equation)")
        env = r.env
    order = sorted(
        zip(edge.consumed, edge.consumed_items), key=lambda pair: chart.edge(pair[0]).start
    )
    children = []
    for child_id, position in order:
        item = variant.items[position]
        child_edge = chart.edge(child_id)
        subtree, env = _build_tree(
            chart, engine, child_edge, env, item.annotations
        )
        if item.kind == "category":
            r = unify(
                rename_variables(item.features, Renamer(suffix)),
                subtree.features,
                env,
            )
            if not r:
                raise EngineError(f"edge {edge.id} no longer re-derives (child)")
            env = r.env
        children.append(subtree)
    node = ParseTree(
        variant.lhs.symbol,
        rename_variables(variant.lhs.features, Renamer(suffix)),
        tuple(children),
        edge.span(),
        annotations,
    )
    return node, env


def _resolve_tree(tree, env):
    return ParseTree(
        tree.label,
        resolve(tree.features, env),
        tuple(_resolve_tree(c, env) for c in tree.children),
        tree.span,
        tree.annotations,
    )


def parse_chart(tokens, grammar, lexicon, start=None, chart=None):
    """Parse bottom-up; returns (readings, chart).

    The chart is returned even when there are no readings, and parsing the
    same sentence twice into one chart inserts nothing new.
    """
    tokens = list(tokens)
    if not tokens:
        raise EngineError("cannot parse an empty token list")
    start_symbol = start or grammar.start
    engine = _Engine(grammar, lexicon)
    if chart is None:
        chart = Chart(tokens)
    elif chart.tokens != tuple(tokens):
        raise EngineError("chart was built over a different token list")
    agenda = deque()
    engine.seed(chart, agenda)
    engine.run(chart, agenda)
    readings = []
    for edge in chart.passive_edges():
        if edge.label == start_symbol and edge.span() == (0, len(tokens)):
            tree, env = _build_tree(chart, engine, edge, {})
            readings.append(_resolve_tree(tree, env))
    return ChartParse(readings, chart)
