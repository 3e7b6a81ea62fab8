"""Independent oracles and random generators used by the test suite.

Everything here recomputes expectations by brute force, without touching
the engines' data paths: derivations are enumerated over sentential forms,
ground feature handling is a plain dict merge, and shortest chart paths are
found by exhaustive search.
"""

from __future__ import annotations

import itertools
import random


# ---------------------------------------------------------------------------
# Ground flat feature handling (independent of the unification engine)


def flat_merge(a, b):
    """Merge two ground flat feature dicts; None on any conflicting value."""
    merged = dict(a)
    for k, v in b.items():
        if k in merged and merged[k] != v:
            return None
        merged[k] = v
    return merged


# ---------------------------------------------------------------------------
# Brute-force derivation enumeration over simple symbol grammars
#
# A production is (lhs, rhs) with rhs a list of items:
#   ("cat", symbol, optional, feats_on_item) | ("term", text) | ("eps",)
# Each lhs carries ground flat features per production (feats_lhs).


class SimpleGrammar:
    def __init__(self, prods, lp=(), ordered=True):
        self.prods = prods  # list of (lhs, feats_lhs, rhs_items)
        self.lp = set(lp)  # precedence pairs (a, b): a before b
        self.ordered = ordered

    def by_lhs(self, symbol):
        return [p for p in self.prods if p[0] == symbol]

    def symbols(self):
        out = []
        for lhs, _, rhs in self.prods:
            if lhs not in out:
                out.append(lhs)
            for item in rhs:
                if item[0] == "cat" and item[1] not in out:
                    out.append(item[1])
        return out


def _lp_closure(pairs):
    closure = set(pairs)
    changed = True
    while changed:
        changed = False
        for a, b in list(closure):
            for c, d in list(closure):
                if b == c and (a, d) not in closure:
                    closure.add((a, d))
                    changed = True
    return closure


def _optional_expansions(rhs):
    opts = [i for i, item in enumerate(rhs) if item[0] == "cat" and item[2]]
    for mask in itertools.product((True, False), repeat=len(opts)):
        keep = dict(zip(opts, mask))
        items = []
        for i, item in enumerate(rhs):
            if item[0] == "eps":
                continue
            if item[0] == "cat" and item[2] and not keep[i]:
                continue
            items.append(item)
        yield tuple(items)


def _item_key(item):
    if item[0] == "cat":
        return ("cat", item[1], item[2], tuple(sorted(item[3].items())))
    return item


def _orderings(items, ordered, closure):
    if ordered:
        yield items
        return
    seen = set()
    for perm in itertools.permutations(range(len(items))):
        seq = tuple(items[i] for i in perm)
        key = tuple(_item_key(i) for i in seq)
        if key in seen:
            continue
        seen.add(key)
        ok = True
        for i in range(len(seq)):
            for j in range(i + 1, len(seq)):
                if seq[i][0] == "cat" and seq[j][0] == "cat":
                    # seq[j] comes after seq[i]: reject if it must precede it.
                    if (seq[j][1], seq[i][1]) in closure:
                        ok = False
            if not ok:
                break
        if ok:
            yield seq


def oracle_derivations(grammar, tokens, start="S", max_depth=24):
    """All derivation trees of ``tokens`` from ``start``, brute force.

    Trees are nested tuples (symbol, feats_tuple, production_index,
    children...).  Two orderings of one production's unordered right-hand
    side that consume the same children give the same tree; a reading is a
    tree, so such duplicates collapse.
    """
    closure = _lp_closure(grammar.lp)
    indexed = list(enumerate(grammar.prods))

    def derive_cat(symbol, i, depth):
        if depth > max_depth:
            raise RecursionError("oracle depth exceeded; grammar not DAG-like")
        out = []
        for prod_idx, (lhs, feats_lhs, rhs) in indexed:
            if lhs != symbol:
                continue
            seen = set()
            for items in _optional_expansions(rhs):
                for seq in _orderings(items, grammar.ordered, closure):
                    for j, children in derive_seq(seq, i, depth):
                        tree = (
                            symbol,
                            tuple(sorted(feats_lhs.items())),
                            prod_idx,
                        ) + tuple(children)
                        if (j, tree) not in seen:
                            seen.add((j, tree))
                            out.append((j, tree))
        return out

    def derive_seq(seq, i, depth):
        if not seq:
            yield i, ()
            return
        head, rest = seq[0], seq[1:]
        if head[0] == "term":
            if i < len(tokens) and tokens[i] == head[1]:
                for j, children in derive_seq(rest, i + 1, depth):
                    leaf = (head[1], (), -1)
                    yield j, (leaf,) + children
            return
        _, symbol, _, feats_item = head
        for mid, subtree in derive_cat(symbol, i, depth + 1):
            # The child's own features must be compatible with the item's.
            child_feats = dict(subtree[1])
            if flat_merge(child_feats, feats_item) is None:
                continue
            for j, children in derive_seq(rest, mid, depth):
                yield j, (subtree,) + children

    return [tree for j, tree in derive_cat(start, 0, 0) if j == len(tokens)]


# ---------------------------------------------------------------------------
# Leftmost-derivation nontermination oracle


def oracle_left_recursive(prods, depth_cap=12, prefix_cap=16):
    """True iff some leftmost derivation re-expands its own start symbol
    without consuming input.  ``prods``: dict symbol -> list of rhs lists,
    items as in SimpleGrammar (features ignored).
    """

    def expansions(symbol):
        for rhs in prods.get(symbol, ()):
            yield from _optional_expansions(tuple(rhs))

    def runs_left_recursive(target):
        frontier = {(target,)}
        seen = set()
        for _ in range(depth_cap):
            new = set()
            for form in frontier:
                if not form:
                    continue
                head = form[0]
                if head not in prods:  # terminal or undefined: consumes input
                    continue
                for items in expansions(head):
                    symbols = tuple(
                        it[1] if it[0] == "cat" else f"'{it[1]}'" for it in items
                    )
                    nf = (symbols + form[1:])[:prefix_cap]
                    if nf and nf[0] == target:
                        return True
                    if nf not in seen:
                        seen.add(nf)
                        new.add(nf)
            frontier = new
            if not frontier:
                break
        return False

    return any(runs_left_recursive(sym) for sym in prods)


# ---------------------------------------------------------------------------
# Exhaustive shortest-path enumeration over edge views


def oracle_shortest_paths(edges, tokens):
    """All minimal-edge-count paths from 0 to n, by exhaustive enumeration.

    Mirrors the augmentation rule: a one-token word edge exists wherever no
    edge starts.  Returns a list of tuples of (start, end, label, id).
    """
    n = len(tokens)
    arcs = {}
    starts = {e.start for e in edges}
    all_edges = list(edges)
    for i, tok in enumerate(tokens):
        if i not in starts:
            from grambench.diagnostics import EdgeView

            all_edges.append(EdgeView(i, i + 1, tok, None, True))
    for e in all_edges:
        if e.end > e.start:
            arcs.setdefault(e.start, []).append(e)

    complete = []

    def walk(pos, acc):
        if pos == n:
            complete.append(tuple(acc))
            return
        for e in arcs.get(pos, ()):
            walk(e.end, acc + [e])

    walk(0, [])
    if not complete:
        return []
    best = min(len(p) for p in complete)
    return [p for p in complete if len(p) == best]


# ---------------------------------------------------------------------------
# Random generators


ATOMS = ["nom", "akk", "dat", "sg", "pl", "mask", "fem", "neut", "x", "y"]
FEATURES = ["kas", "num", "gen", "per", "art"]
VARS = ["A", "B", "C", "K", "N", "X"]


def random_value(rng, depth):
    from grambench.featstruct import Var

    roll = rng.random()
    if depth > 0 and roll < 0.25:
        return random_fs(rng, depth - 1)
    if roll < 0.5:
        return Var(rng.choice(VARS))
    return rng.choice(ATOMS)


def random_fs(rng, depth=3):
    from grambench.featstruct import FeatStruct

    n = rng.randint(0, 3)
    names = rng.sample(FEATURES, n)
    return FeatStruct({name: random_value(rng, depth) for name in names})


def random_simple_grammar(rng, max_symbols=5, ordered=True, with_features=True,
                          with_lp=False):
    """A DAG-shaped grammar (rules only reference later symbols), so both
    engines and the oracle terminate with finite reading sets."""
    n_syms = rng.randint(2, max_symbols)
    symbols = ["S"] + [f"C{i}" for i in range(1, n_syms)]
    terminals = ["a", "b", "c", "d"]
    prods = []
    for idx, sym in enumerate(symbols):
        later = symbols[idx + 1 :]
        for _ in range(rng.randint(1, 2)):
            feats_lhs = {}
            if with_features and rng.random() < 0.5:
                feats_lhs = {rng.choice(FEATURES): rng.choice(ATOMS[:4])}
            rhs = []
            for _ in range(rng.randint(1, 3)):
                if later and rng.random() < 0.6:
                    feats_item = {}
                    if with_features and rng.random() < 0.4:
                        feats_item = {rng.choice(FEATURES): rng.choice(ATOMS[:4])}
                    optional = rng.random() < 0.2
                    rhs.append(("cat", rng.choice(later), optional, feats_item))
                else:
                    rhs.append(("term", rng.choice(terminals)))
            prods.append((sym, feats_lhs, rhs))
    lp = set()
    if with_lp:
        for _ in range(rng.randint(0, 2)):
            a, b = rng.sample(symbols, 2)
            lp.add((a, b))
    return SimpleGrammar(prods, lp, ordered)


def simple_grammar_source(grammar):
    """Render a SimpleGrammar as workbench grammar source text."""
    lines = ["%FORMALISM " + ("DCG" if grammar.ordered else "IDLP")]
    if grammar.lp:
        lines.append("%LP")
        for a, b in sorted(grammar.lp):
            lines.append(f"{a} < {b}.")
    lines.append("%RULES")
    for lhs, feats_lhs, rhs in grammar.prods:
        lhs_text = lhs
        if feats_lhs:
            inner = ", ".join(f"{k}={v}" for k, v in sorted(feats_lhs.items()))
            lhs_text = f"{lhs}[{inner}]"
        items = []
        for item in rhs:
            if item[0] == "term":
                items.append(f"'{item[1]}'")
            elif item[0] == "eps":
                items.append("EPSILON")
            else:
                _, sym, optional, feats = item
                text = sym
                if feats:
                    inner = ", ".join(f"{k}={v}" for k, v in sorted(feats.items()))
                    text = f"{sym}[{inner}]"
                if optional:
                    text = f"({text})"
                items.append(text)
        lines.append(f"{lhs_text} -> {', '.join(items)}.")
    return "\n".join(lines) + "\n"


def random_sentence(rng, grammar, max_len=6, tries=30):
    """Sample a sentence the grammar can plausibly derive (or a random one)."""

    def sample(symbol, depth):
        if depth > 10:
            raise RecursionError
        prods = grammar.by_lhs(symbol)
        if not prods:
            return None
        lhs, feats, rhs = rng.choice(prods)
        words = []
        for item in rhs:
            if item[0] == "term":
                words.append(item[1])
            elif item[0] == "cat":
                if item[2] and rng.random() < 0.5:
                    continue
                sub = sample(item[1], depth + 1)
                if sub is None:
                    return None
                words.extend(sub)
        return words

    for _ in range(tries):
        try:
            words = sample("S", 0)
        except RecursionError:
            words = None
        if words and len(words) <= max_len:
            return words
    return [rng.choice(["a", "b", "c"]) for _ in range(rng.randint(1, 4))]


def random_recursive_prods(rng, max_symbols=8):
    """Arbitrary symbol grammars (cycles allowed) for left-recursion tests."""
    n = rng.randint(1, max_symbols)
    symbols = [f"A{i}" for i in range(n)]
    prods = {}
    for sym in symbols:
        rules = []
        for _ in range(rng.randint(1, 3)):
            rhs = []
            length = rng.randint(0, 3)
            if length == 0:
                rhs.append(("eps",))
            for _ in range(length):
                roll = rng.random()
                if roll < 0.55:
                    rhs.append(
                        ("cat", rng.choice(symbols), rng.random() < 0.25, {})
                    )
                elif roll < 0.9:
                    rhs.append(("term", rng.choice(["t", "u", "v"])))
                else:
                    rhs.append(("eps",))
            rules.append(rhs)
        prods[sym] = rules
    return prods


def prods_to_source(prods, formalism="DCG"):
    lines = [f"%FORMALISM {formalism}", "%RULES"]
    for sym, rules in prods.items():
        for rhs in rules:
            items = []
            for item in rhs:
                if item[0] == "eps":
                    items.append("EPSILON")
                elif item[0] == "term":
                    items.append(f"'{item[1]}'")
                else:
                    items.append(f"({item[1]})" if item[2] else item[1])
            lines.append(f"{sym} -> {', '.join(items)}.")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Random trees and seeded mutations


LABELS = ["S", "NP", "VP", "PP", "N", "V", "Det"]
WORDS = ["der", "hund", "katze", "jagt", "in", "garten"]


def random_tree(rng, depth=3):
    from grambench.featstruct import FeatStruct
    from grambench.results import ParseTree

    def build(depth):
        if depth == 0 or rng.random() < 0.25:
            word = ParseTree(rng.choice(WORDS), FeatStruct.EMPTY, (), (0, 1))
            feats = {rng.choice(FEATURES): rng.choice(ATOMS)}
            return ParseTree(rng.choice(LABELS), FeatStruct(feats), (word,), (0, 1))
        n = rng.randint(1, 3)
        children = tuple(build(depth - 1) for _ in range(n))
        feats = {}
        for _ in range(rng.randint(0, 2)):
            feats[rng.choice(FEATURES)] = rng.choice(ATOMS)
        return ParseTree(rng.choice(LABELS), FeatStruct(feats), children, (0, 1))

    return build(depth)


def mutate_tree(rng, tree):
    """Seed exactly one mutation; returns (mutated, kind, node_path)."""
    from grambench.featstruct import FeatStruct
    from grambench.results import ParseTree

    paths = [path for path, _ in tree.nodes()]
    kind = rng.choice(["shape", "label", "feature"])

    def rebuild(node, path):
        if path == target:
            if kind == "shape":
                extra = ParseTree("X", FeatStruct.EMPTY, (), (0, 1))
                if node.children and rng.random() < 0.5:
                    children = node.children[:-1]
                else:
                    children = node.children + (extra,)
                return ParseTree(node.label, node.features, children, node.span)
            if kind == "label":
                new_label = node.label + "_m"
                return ParseTree(new_label, node.features, node.children, node.span)
            pairs = dict(node.features.items())
            feature = rng.choice(FEATURES)
            old = pairs.get(feature)
            choices = [a for a in ATOMS if a != old]
            pairs[feature] = rng.choice(choices)
            return ParseTree(node.label, FeatStruct(pairs), node.children, node.span)
        return ParseTree(
            node.label,
            node.features,
            tuple(rebuild(c, path + (i,)) for i, c in enumerate(node.children)),
            node.span,
        )

    if kind == "shape":
        # Arity changes are only visible on nodes; picking a leaf adds a child.
        target = rng.choice(paths)
    elif kind == "label":
        target = rng.choice(paths)
    else:
        target = rng.choice(paths)
    return rebuild(tree, ()), kind, target


def random_chart_edges(rng, n_tokens, max_edges=20):
    from grambench.diagnostics import EdgeView

    count = rng.randint(0, max_edges)
    edges = []
    ids = list(range(1, count + 1))
    rng.shuffle(ids)
    for k in range(count):
        start = rng.randint(0, n_tokens - 1)
        end = rng.randint(start + 1, n_tokens)
        edges.append(EdgeView(start, end, rng.choice(LABELS), ids[k], False))
    return edges
