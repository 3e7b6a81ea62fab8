"""Top-down depth-first parser with a well-formed substring table,
four-port tracing, breakpoint control, and an f-structure solver for
annotated grammars.

The engine refuses grammars with left-recursion findings (it would loop) and
carries a depth guard as a backstop; the guard firing is reported as its own
error since the static gate should make it unreachable.

Goals are memoized per (category symbol, start position).  A memo entry is
computed without the caller's feature constraints and re-unified against
them on every use, which keeps the table sound under arbitrary bindings;
a completed entry list that is empty doubles as a failure marker.
"""

from __future__ import annotations

import sys
import threading
from dataclasses import dataclass, field

from .errors import (
    DepthGuardExceeded,
    EngineError,
    LeftRecursionError,
    ParseAborted,
)
from .featstruct import (
    FeatStruct,
    Inst,
    Renamer,
    Var,
    is_ground,
    render_fs,
    normalize_coindices,
    rename_variables,
    resolve,
    unify,
)
from .grammar import FPath
from .results import ParseTree

ENTRY, EXIT, FAIL, REDO = "ENTRY", "EXIT", "FAIL", "REDO"


@dataclass(frozen=True)
class TraceEvent:
    seq: int
    port: str
    category: str
    features: str  # rendered snapshot of the goal's call features
    depth: int
    position: int
    goal_id: int

    def render(self):
        pad = "  " * self.depth
        return f"{pad}{self.port} {self.category}{self.features} @ {self.position}"

    def to_json_dict(self):
        return {
            "seq": self.seq,
            "port": self.port,
            "category": self.category,
            "features": self.features,
            "depth": self.depth,
            "position": self.position,
            "goal": self.goal_id,
        }


class TraceControl:
    """Cross-thread control of a running parse: filter, breakpoints, pausing.

    The parser calls ``on_entry`` for every goal; depending on mode and
    breakpoints that call blocks until the controlling side steps, resumes,
    or aborts.  Tracing never alters parse results.
    """

    def __init__(self, filter=None, breakpoints=(), mode="run"):
        self._cond = threading.Condition()
        self._filter = None if filter is None else frozenset(filter)
        self._breakpoints = frozenset(breakpoints)
        self._mode = mode
        self._pending_steps = 0
        self._go = False
        self.paused_at = None

    # -- controlling side ---------------------------------------------------

    def set_filter(self, categories):
        with self._cond:
            self._filter = None if categories is None else frozenset(categories)

    def set_breakpoints(self, categories):
        with self._cond:
            self._breakpoints = frozenset(categories)

    def step(self, n=1):
        """Release the paused goal and pause again after n-1 further goals."""
        with self._cond:
            self._mode = "step"
            self._pending_steps += max(0, n - 1)
            self._go = True
            self._cond.notify_all()

    def resume(self):
        """Run on, pausing only at the next breakpoint."""
        with self._cond:
            self._mode = "run"
            self._go = True
            self._cond.notify_all()

    def abort(self):
        with self._cond:
            self._mode = "abort"
            self._cond.notify_all()

    @property
    def mode(self):
        return self._mode

    @property
    def filter(self):
        return self._filter

    @property
    def breakpoints(self):
        return self._breakpoints

    # -- parser side ----------------------------------------------------------

    def wants(self, category):
        f = self._filter
        return f is None or category in f

    def on_entry(self, category, position):
        with self._cond:
            if self._mode == "abort":
                raise ParseAborted()
            hit_breakpoint = category in self._breakpoints
            if not hit_breakpoint and self._mode != "step":
                return
            if not hit_breakpoint and self._pending_steps > 0:
                self._pending_steps -= 1
                return
            self.paused_at = (category, position)
            self._go = False
            while not self._go:
                if self._mode == "abort":
                    self.paused_at = None
                    raise ParseAborted()
                self._cond.wait(timeout=0.5)
            self.paused_at = None


@dataclass
class WfsEntry:
    id: int
    end: int
    features: object
    tree: ParseTree
    ground: bool = False  # variable-free entries skip renaming on reuse


@dataclass
class WfsCell:
    complete: bool = False
    entries: list = field(default_factory=list)


class WfsTable:
    """Memo of (category symbol, start index) -> solutions found so far."""

    def __init__(self):
        self.cells = {}
        self._next_id = 0

    def cell(self, symbol, position):
        key = (symbol, position)
        if key not in self.cells:
            self.cells[key] = WfsCell()
        return self.cells[key]

    def new_id(self):
        self._next_id += 1
        return self._next_id - 1

    def edge_views(self):
        """(start, end, label, id) tuples for the diagnostics module."""
        out = []
        for (symbol, start), cell in self.cells.items():
            for entry in cell.entries:
                out.append((start, entry.end, symbol, entry.id))
        return out

    def to_json_dict(self):
        return {
            "cells": [
                {
                    "symbol": symbol,
                    "position": position,
                    "complete": cell.complete,
                    "solutions": [
                        {"id": e.id, "end": e.end,
                         "features": render_fs(normalize_coindices(e.features))}
                        for e in cell.entries
                    ],
                }
                for (symbol, position), cell in sorted(self.cells.items())
            ]
        }


@dataclass
class TdParse:
    readings: list  # list[ParseTree]
    fstructures: list  # list[FeatStruct | None], parallel to readings
    wfst: WfsTable
    trace: list
    aborted: bool = False
    rejected: list = field(default_factory=list)  # (tree, FStructReport) pairs


class _Session:
    def __init__(self, tokens, grammar, lexicon, control, trace_sink,
                 memoize=True, depth_limit=None):
        self.tokens = tokens
        self.grammar = grammar
        self.lexicon = lexicon
        self.control = control
        self.trace = []
        self.trace_sink = trace_sink
        self.memoize = memoize
        self.wfst = WfsTable()
        self.in_progress = set()
        self._suffix = 0
        self._goal_id = 0
        self._seq = 0
        self.variants_by_symbol = {}
        for v in grammar.variants():
            self.variants_by_symbol.setdefault(v.lhs.symbol, []).append(v)
        if depth_limit is None:
            depth_limit = 10 * (len(grammar.rules) + len(tokens))
        self.depth_limit = depth_limit

    def fresh(self):
        self._suffix += 1
        return self._suffix

    def emit(self, port, category, feats_text, depth, position, goal_id):
        if not self.control.wants(category):
            return
        event = TraceEvent(self._seq, port, category, feats_text, depth, position, goal_id)
        self._seq += 1
        self.trace.append(event)
        if self.trace_sink is not None:
            self.trace_sink(event)

    def goal(self, symbol, call_features, position, depth, env):
        """Yield (end, env, tree) for every way ``symbol`` spans from ``position``."""
        if depth > self.depth_limit:
            raise DepthGuardExceeded(
                f"derivation depth exceeded {self.depth_limit} at "
                f"{symbol!r}, position {position}"
            )
        goal_id = self._goal_id = self._goal_id + 1
        traced = self.control.wants(symbol)
        snapshot = (
            render_fs(normalize_coindices(resolve(call_features, env)))
            if traced
            else ""
        )
        self.emit(ENTRY, symbol, snapshot, depth, position, goal_id)
        self.control.on_entry(symbol, position)
        for end, feats, tree, ground in self.solutions(symbol, position, depth):
            if not ground:
                renamer = Renamer(self.fresh())
                feats = rename_variables(feats, renamer)
            r = unify(call_features, feats, env)
            if not r:
                continue
            if not ground:
                tree = _rename_tree(tree, renamer)
            self.emit(EXIT, symbol, snapshot, depth, end, goal_id)
            yield end, r.env, tree
            self.emit(REDO, symbol, snapshot, depth, position, goal_id)
        self.emit(FAIL, symbol, snapshot, depth, position, goal_id)

    def solutions(self, symbol, position, depth):
        """Solutions for a goal, unconstrained by the caller's features.

        Yields (end, features, tree, ground); ground entries need no
        variable renaming on reuse.
        """
        if not self.memoize:
            for end, feats, tree in self.alternatives(symbol, position, depth):
                yield end, feats, tree, False
            return
        key = (symbol, position)
        cell = self.wfst.cell(symbol, position)
        if cell.complete:
            yield from ((e.end, e.features, e.tree, e.ground) for e in cell.entries)
            return
        if key in self.in_progress:
            # Re-entered while computing: fall back to direct search.
            for end, feats, tree in self.alternatives(symbol, position, depth):
                yield end, feats, tree, False
            return
        self.in_progress.add(key)
        try:
            found = []
            for end, feats, tree in self.alternatives(symbol, position, depth):
                found.append((end, feats, tree))
                yield end, feats, tree, False
            fresh_cell = self.wfst.cell(symbol, position)
            if not fresh_cell.complete:
                for end, feats, tree in found:
                    fresh_cell.entries.append(
                        WfsEntry(
                            self.wfst.new_id(), end, feats, tree,
                            is_ground(feats) and _tree_ground(tree),
                        )
                    )
                fresh_cell.complete = True
        finally:
            self.in_progress.discard(key)

    def alternatives(self, symbol, position, depth):
        """Grammar rules in textual order, then lexical categories in entry order."""
        for variant in self.variants_by_symbol.get(symbol, ()):
            suffix = self.fresh()
            renamer = Renamer(suffix)
            env = {}
            ok = True
            for var, value in variant.rule.equations:
                r = unify(Var(renamer(var)), rename_variables(value, renamer), env)
                if not r:
                    ok = False
                    break
                env = r.env
            if not ok:
                continue
            for end, env2, children in self.body(
                variant, 0, position, depth, env, renamer
            ):
                lhs = rename_variables(variant.lhs.features, renamer)
                tree = ParseTree(
                    symbol,
                    resolve(lhs, env2),
                    tuple(_resolve_tree(c, env2) for c in children),
                    (position, end),
                )
                yield end, tree.features, tree
        if position < len(self.tokens):
            word = self.tokens[position]
            for cat in self.lexicon.categories(word):
                if cat.symbol != symbol:
                    continue
                leaf = ParseTree(word, FeatStruct.EMPTY, (), (position, position + 1))
                tree = ParseTree(
                    symbol, cat.features, (leaf,), (position, position + 1)
                )
                yield position + 1, cat.features, tree

    def body(self, variant, index, position, depth, env, renamer):
        """Parse the rule body left to right from ``index``."""
        if index == len(variant.items):
            yield position, env, ()
            return
        item = variant.items[index]
        if item.kind == "terminal":
            if position < len(self.tokens) and self.tokens[position] == item.symbol:
                leaf = ParseTree(
                    item.symbol, FeatStruct.EMPTY, (), (position, position + 1)
                )
                for end, env2, rest in self.body(
                    variant, index + 1, position + 1, depth, env, renamer
                ):
                    yield end, env2, (leaf,) + rest
            return
        call_features = rename_variables(item.features, renamer)
        for mid, env2, subtree in self.goal(
            item.symbol, call_features, position, depth + 1, env
        ):
            subtree = ParseTree(
                subtree.label,
                subtree.features,
                subtree.children,
                subtree.span,
                item.annotations,
            )
            for end, env3, rest in self.body(
                variant, index + 1, mid, depth, env2, renamer
            ):
                yield end, env3, (subtree,) + rest


def _tree_ground(tree):
    return is_ground(tree.features) and all(_tree_ground(c) for c in tree.children)


def _rename_tree(tree, renamer):
    feats = rename_variables(tree.features, renamer)
    children = tuple(_rename_tree(c, renamer) for c in tree.children)
    if feats is tree.features and all(a is b for a, b in zip(children, tree.children)):
        return tree
    return ParseTree(tree.label, feats, children, tree.span, tree.annotations)


def _resolve_tree(tree, env):
    if not env:
        return tree
    feats = resolve(tree.features, env)
    children = tuple(_resolve_tree(c, env) for c in tree.children)
    if feats is tree.features and all(a is b for a, b in zip(children, tree.children)):
        return tree
    return ParseTree(tree.label, feats, children, tree.span, tree.annotations)


def parse_topdown(tokens, grammar, lexicon, start=None, control=None,
                  trace_sink=None, memoize=True, depth_limit=None):
    """Exhaustive depth-first parse; returns readings, the substring table,
    and the trace stream.

    Raises LeftRecursionError when the static check found a cycle, and
    DepthGuardExceeded if the backstop fires regardless.
    """
    tokens = list(tokens)
    if not tokens:
        raise EngineError("cannot parse an empty token list")
    findings = grammar.left_recursion_findings()
    if findings:
        raise LeftRecursionError(findings)
    control = control or TraceControl()
    session = _Session(
        tokens, grammar, lexicon, control, trace_sink, memoize, depth_limit
    )
    start_symbol = start or grammar.start
    found = []
    aborted = False
    # Nested goal generators cost a dozen interpreter frames per level; the
    # limit is only ever raised (lowering would race concurrent sessions).
    wanted = min(100_000, 20 * session.depth_limit + 1000)
    if wanted > sys.getrecursionlimit():
        sys.setrecursionlimit(wanted)
    try:
        for end, env, tree in session.goal(
            start_symbol, FeatStruct.EMPTY, 0, 0, {}
        ):
            if end == len(tokens):
                found.append(_resolve_tree(tree, env))
    except ParseAborted:
        aborted = True
    readings = []
    fstructures = []
    rejected = []
    for tree in found:
        if grammar.formalism == "LFG":
            # A reading is grammatical only with a consistent f-structure.
            report = solve_fstructure(tree)
            if report.ok:
                readings.append(tree)
                fstructures.append(report.fstructure)
            else:
                rejected.append((tree, report))
        else:
            readings.append(tree)
            fstructures.append(None)
    return TdParse(
        readings, fstructures, session.wfst, session.trace, aborted, rejected
    )


# ---------------------------------------------------------------------------
# f-structure solving


@dataclass
class FStructReport:
    ok: bool
    fstructure: object = None
    node_path: tuple[int, ...] | None = None
    feature_path: tuple[str, ...] | None = None
    message: str = ""

    def render(self):
        if self.ok:
            return render_fs(self.fstructure, "indented")
        return self.message


class _FSolver:
    def __init__(self):
        self.env = {}
        self.counter = 0
        self.inst = 0

    def fresh_cell(self):
        self.counter += 1
        return Var(f"F{self.counter}")

    def instantiate_preds(self, value):
        """Make every ``pred`` value unique to its use."""
        if isinstance(value, FeatStruct):
            return FeatStruct(
                (
                    n,
                    self._inst_atom(v) if n == "pred" else self.instantiate_preds(v),
                )
                for n, v in value.items()
            )
        return value

    def _inst_atom(self, v):
        if isinstance(v, str):
            self.inst += 1
            return Inst(v, self.inst)
        return self.instantiate_preds(v)

    def path_cell(self, root_cell, attrs):
        """The cell at ``attrs`` under ``root_cell``, creating structure as needed."""
        cell = root_cell
        for k, attr in enumerate(attrs):
            nxt = self.fresh_cell()
            r = unify(cell, FeatStruct({attr: nxt}), self.env)
            if not r:
                r.path = attrs[:k] + r.path
                return None, r
            self.env = r.env
            cell = nxt
        return cell, None

    def equate(self, mother_cell, self_cell, equation):
        """Apply one equation.  Failure paths are reported relative to the
        equation's root cell, prefixed with the equation's own attributes."""
        lhs_root = mother_cell if equation.lhs.root == "^" else self_cell
        lhs_cell, fail = self.path_cell(lhs_root, equation.lhs.attrs)
        if lhs_cell is None:
            return fail
        rhs = equation.rhs
        if isinstance(rhs, FPath):
            rhs_root = mother_cell if rhs.root == "^" else self_cell
            rhs_value, fail = self.path_cell(rhs_root, rhs.attrs)
            if rhs_value is None:
                return fail
        elif isinstance(rhs, str) and equation.lhs.attrs[-1:] == ("pred",):
            rhs_value = self._inst_atom(rhs)
        else:
            rhs_value = self.instantiate_preds(rhs)
        r = unify(lhs_cell, rhs_value, self.env)
        if not r:
            r.path = equation.lhs.attrs + r.path
            return r
        self.env = r.env
        return None


def solve_fstructure(tree):
    """Solve the functional equations collected from an annotated parse tree.

    ``^=!`` identifies a child's structure with its mother's, ``(^ a)=!``
    embeds the child under attribute ``a``, and atom equations set values.
    Preterminal feature structures feed their node's cell directly.  Returns
    the least satisfying structure or the first clash with its tree-node
    path and feature path.
    """
    solver = _FSolver()
    root_cell = solver.fresh_cell()

    def is_preterminal(node):
        return len(node.children) == 1 and node.children[0].is_leaf

    def walk(node, cell, path):
        if is_preterminal(node):
            r = unify(cell, solver.instantiate_preds(node.features), solver.env)
            if not r:
                return FStructReport(
                    False,
                    node_path=path,
                    feature_path=r.path,
                    message=_clash_message(path, r.path, node.label),
                )
            solver.env = r.env
            return None
        for i, child in enumerate(node.children):
            if child.is_leaf:
                continue
            child_cell = solver.fresh_cell()
            for eq in child.annotations:
                fail = solver.equate(cell, child_cell, eq)
                if fail is not None:
                    return FStructReport(
                        False,
                        node_path=path + (i,),
                        feature_path=fail.path,
                        message=_clash_message(path + (i,), fail.path, child.label),
                    )
            report = walk(child, child_cell, path + (i,))
            if report is not None:
                return report
        return None

    report = walk(tree, root_cell, ())
    if report is not None:
        return report
    return FStructReport(True, resolve(root_cell, solver.env))


def _clash_message(node_path, feature_path, label):
    where = "/".join(str(i) for i in node_path) or "<root>"
    fpath = ".".join(feature_path) or "<root>"
    return (
        f"inconsistent f-structure at node {where} ({label}): "
        f"clash at feature path {fpath}"
    )
