"""Parse results: trees, rendering, canonical serialization, the three-level
comparison tool, and the baseline regression store.

Comparison works through three strict levels: first branching structure,
then node labels, then feature structures.  It stops at the first
difference and reports the node path (a sequence of child indices from the
root).  Feature-level equality is mutual subsumption, i.e. isomorphism up
to variable naming.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from dataclasses import dataclass, field

from .featstruct import (
    FeatStruct,
    equivalent,
    normalize_coindices,
    parse_fs,
    render_fs,
)

STORE_MAGIC = "grambench-baseline 1"

VERDICT_EQUAL = "equal"
VERDICT_SHAPE = "shape_diff"
VERDICT_LABEL = "label_diff"
VERDICT_FEATURE = "feature_diff"
VERDICT_COUNT = "reading_count_diff"


@dataclass(frozen=True)
class ParseTree:
    """A labeled node with its instantiated feature structure and token span."""

    label: str
    features: object = FeatStruct.EMPTY
    children: tuple = ()
    span: tuple[int, int] = (0, 0)
    annotations: tuple = field(default=(), compare=False)

    @property
    def is_leaf(self):
        return not self.children

    def nodes(self):
        """Preorder traversal of (path, node)."""
        yield (), self
        for i, child in enumerate(self.children):
            for path, node in child.nodes():
                yield (i,) + path, node

    def node_at(self, path):
        node = self
        for i in path:
            node = node.children[i]
        return node

    def leaves(self):
        if self.is_leaf:
            return [self]
        out = []
        for c in self.children:
            out.extend(c.leaves())
        return out


@dataclass(frozen=True)
class Reading:
    tree: ParseTree
    fstructure: object = None  # FeatStruct | None


@dataclass
class ParseResult:
    sentence: str
    tokens: tuple[str, ...]
    readings: tuple[Reading, ...]
    engine: str
    fingerprint: str
    timestamp: float = 0.0
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.timestamp:
            self.timestamp = time.time()

    @property
    def reading_count(self):
        return len(self.readings)


def make_result(sentence, tokens, readings, engine, fingerprint):
    return ParseResult(sentence, tuple(tokens), tuple(readings), engine, fingerprint)


# ---------------------------------------------------------------------------
# Comparison


@dataclass(frozen=True)
class ComparisonReport:
    verdict: str
    path: tuple[int, ...] | None = None
    detail: dict = field(default_factory=dict)

    def render(self):
        if self.verdict == VERDICT_EQUAL:
            return "equal"
        where = "/".join(str(i) for i in self.path) if self.path else "<root>"
        bits = ", ".join(f"{k}={v}" for k, v in sorted(self.detail.items()))
        return f"{self.verdict} at {where} ({bits})"

    def to_json_dict(self):
        return {
            "verdict": self.verdict,
            "path": list(self.path) if self.path is not None else None,
            "detail": dict(sorted(self.detail.items())),
        }


def _shape_diff(a, b, path):
    if len(a.children) != len(b.children):
        return path, len(a.children), len(b.children)
    for i, (ca, cb) in enumerate(zip(a.children, b.children)):
        hit = _shape_diff(ca, cb, path + (i,))
        if hit:
            return hit
    return None


def _label_diff(a, b, path):
    if a.label != b.label:
        return path, a.label, b.label
    for i, (ca, cb) in enumerate(zip(a.children, b.children)):
        hit = _label_diff(ca, cb, path + (i,))
        if hit:
            return hit
    return None


def _feature_path_diff(a, b):
    """First path where two structures disagree, walking features in order."""

    def walk(x, y, path):
        if isinstance(x, FeatStruct) and isinstance(y, FeatStruct):
            for name in sorted(set(x.names()) | set(y.names())):
                if name not in x or name not in y:
                    return path + (name,)
                hit = walk(x.get(name), y.get(name), path + (name,))
                if hit:
                    return hit
            return None
        if isinstance(x, FeatStruct) or isinstance(y, FeatStruct):
            return path
        # Atoms, variables, instantiated atoms: compare canonically.
        if x != y:
            return path
        return None

    na, nb = normalize_coindices(a), normalize_coindices(b)
    hit = walk(na, nb, ())
    return hit if hit is not None else ()


def _features_diff(a, b, path):
    if not equivalent(a.features, b.features):
        return path, a, b
    for i, (ca, cb) in enumerate(zip(a.children, b.children)):
        hit = _features_diff(ca, cb, path + (i,))
        if hit:
            return hit
    return None


def compare_trees(a, b):
    """Three-level comparison: shape, then labels, then features.

    Levels are evaluated strictly in order and the procedure stops at the
    first difference found.
    """
    hit = _shape_diff(a, b, ())
    if hit:
        path, arity_a, arity_b = hit
        return ComparisonReport(
            VERDICT_SHAPE, path, {"arity_a": arity_a, "arity_b": arity_b}
        )
    hit = _label_diff(a, b, ())
    if hit:
        path, la, lb = hit
        return ComparisonReport(VERDICT_LABEL, path, {"label_a": la, "label_b": lb})
    hit = _features_diff(a, b, ())
    if hit:
        path, na, nb = hit
        fpath = _feature_path_diff(na.features, nb.features)
        return ComparisonReport(
            VERDICT_FEATURE,
            path,
            {
                "feature_path": ".".join(fpath) or "<root>",
                "features_a": render_fs(normalize_coindices(na.features)),
                "features_b": render_fs(normalize_coindices(nb.features)),
            },
        )
    return ComparisonReport(VERDICT_EQUAL)


def compare_readings(a, b):
    """Comparison of two readings of one result (exposed by the CLI)."""
    return compare_trees(a.tree, b.tree)


@dataclass
class ResultComparison:
    sentence: str
    old_count: int
    new_count: int
    reports: list

    @property
    def verdict(self):
        if self.old_count != self.new_count:
            return VERDICT_COUNT
        for r in self.reports:
            if r.verdict != VERDICT_EQUAL:
                return r.verdict
        return VERDICT_EQUAL

    @property
    def summary(self):
        extra = self.new_count - self.old_count
        if extra > 0:
            noun = "reading" if extra == 1 else "readings"
            return f"{extra} additional {noun}"
        if extra < 0:
            noun = "reading" if extra == -1 else "readings"
            return f"{-extra} missing {noun}"
        return "same number of readings"

    def render(self):
        lines = [
            f"readings: saved {self.old_count}, new {self.new_count} ({self.summary})"
        ]
        for i, r in enumerate(self.reports):
            lines.append(f"reading {i}: {r.render()}")
        return "\n".join(lines)

    def to_json_dict(self):
        return {
            "sentence": self.sentence,
            "old_count": self.old_count,
            "new_count": self.new_count,
            "verdict": self.verdict,
            "summary": self.summary,
            "reports": [r.to_json_dict() for r in self.reports],
        }


def compare_results(old, new):
    """Pair readings by position and compare the first min(n, m) pairs."""
    if old.sentence != new.sentence:
        raise ValueError(
            f"cannot compare results for different sentences: "
            f"{old.sentence!r} vs {new.sentence!r}"
        )
    pairs = min(old.reading_count, new.reading_count)
    reports = [
        compare_trees(old.readings[i].tree, new.readings[i].tree)
        for i in range(pairs)
    ]
    return ResultComparison(new.sentence, old.reading_count, new.reading_count, reports)


# ---------------------------------------------------------------------------
# Rendering


def _normalize_tree(tree):
    """Rename variables and instance tags canonically across a whole tree."""
    feats = [node.features for _, node in tree.nodes()]
    normed = iter(normalize_coindices(feats))

    def rebuild(node):
        # nodes() is preorder; consume the renamed structures in step.
        f = next(normed)
        children = tuple(rebuild(c) for c in node.children)
        return ParseTree(node.label, f, children, node.span)

    return rebuild(tree)


def tree_to_dict(tree):
    return {
        "label": tree.label,
        "span": list(tree.span),
        "features": render_fs(tree.features),
        "children": [tree_to_dict(c) for c in tree.children],
    }


def tree_from_dict(d):
    return ParseTree(
        d["label"],
        parse_fs(d["features"]),
        tuple(tree_from_dict(c) for c in d.get("children", ())),
        tuple(d.get("span", (0, 0))),
    )


def render_tree(tree, mode="ascii_tree"):
    """Render a parse tree as text.

    ``ascii_tree`` shows labels only; ``indented_features`` shows one node
    per line with its full feature structure, folding preterminals onto one
    line with their word; ``json`` round-trips through tree_from_dict.
    """
    if mode == "json":
        return json.dumps(
            tree_to_dict(_normalize_tree(tree)),
            ensure_ascii=False,
            sort_keys=True,
            indent=2,
        )
    if mode == "ascii_tree":
        lines = []

        def walk(node, prefix, tail):
            connector = "" if prefix == "" and not tail else ("`- " if tail else "+- ")
            lines.append(prefix + connector + node.label)
            child_prefix = prefix + ("   " if tail else "|  ") if connector else ""
            for i, c in enumerate(node.children):
                walk(c, child_prefix, i == len(node.children) - 1)

        walk(tree, "", False)
        return "\n".join(lines)
    if mode == "indented_features":
        norm = _normalize_tree(tree)
        lines = []

        def is_preterminal(node):
            return len(node.children) == 1 and node.children[0].is_leaf

        def walk(node, depth):
            pad = "    " * depth
            if node.is_leaf:
                lines.append(f"{pad}{node.label}")
            elif is_preterminal(node):
                word = node.children[0].label
                lines.append(f"{pad}{node.label} '{word}' {render_fs(node.features)}")
            else:
                lines.append(f"{pad}{node.label} {render_fs(node.features)}")
                for c in node.children:
                    walk(c, depth + 1)

        walk(norm, 0)
        return "\n".join(lines)
    raise ValueError(f"unknown tree rendering mode: {mode}")


# ---------------------------------------------------------------------------
# Baseline store


class BaselineMissing(Exception):
    def __init__(self, sentence):
        self.sentence = sentence
        super().__init__(f"no baseline saved for sentence: {sentence!r}")


class StoreFormatError(Exception):
    pass


_store_locks = {}
_store_locks_guard = threading.Lock()


def _sentence_key(sentence):
    return hashlib.sha256(sentence.encode("utf-8")).hexdigest()[:16]


def _lock_for(path):
    with _store_locks_guard:
        if path not in _store_locks:
            _store_locks[path] = threading.Lock()
        return _store_locks[path]


def result_to_dict(result):
    readings = []
    for reading in result.readings:
        tree = _normalize_tree(reading.tree)
        entry = {"tree": tree_to_dict(tree)}
        if reading.fstructure is not None:
            entry["fstructure"] = render_fs(normalize_coindices(reading.fstructure))
        else:
            entry["fstructure"] = None
        readings.append(entry)
    return {
        "sentence": result.sentence,
        "tokens": list(result.tokens),
        "engine": result.engine,
        "fingerprint": result.fingerprint,
        "readings": readings,
        "saved_at": result.timestamp,
    }


def result_from_dict(d, warnings=()):
    readings = []
    for entry in d["readings"]:
        fs = entry.get("fstructure")
        readings.append(
            Reading(tree_from_dict(entry["tree"]), parse_fs(fs) if fs else None)
        )
    return ParseResult(
        d["sentence"],
        tuple(d["tokens"]),
        tuple(readings),
        d["engine"],
        d["fingerprint"],
        d.get("saved_at", 0.0),
        tuple(warnings),
    )


def canonical_result_json(result):
    """Stable canonical serialization; identical results serialize identically."""
    return json.dumps(
        result_to_dict(result), ensure_ascii=False, sort_keys=True, indent=1
    )


def save_result(result, store_dir):
    os.makedirs(store_dir, exist_ok=True)
    path = os.path.join(store_dir, _sentence_key(result.sentence) + ".json")
    payload = STORE_MAGIC + "\n" + canonical_result_json(result) + "\n"
    with _lock_for(path):
        tmp = path + ".tmp"
        with open(tmp, "w", encoding="utf-8") as f:
            f.write(payload)
        os.replace(tmp, path)
    return path


def load_result(sentence, store_dir, expect_fingerprint=None):
    path = os.path.join(store_dir, _sentence_key(sentence) + ".json")
    if not os.path.exists(path):
        raise BaselineMissing(sentence)
    with _lock_for(path):
        with open(path, encoding="utf-8") as f:
            text = f.read()
    magic, _, body = text.partition("\n")
    if magic != STORE_MAGIC:
        raise StoreFormatError(
            f"{path}: unsupported baseline format {magic!r} "
            f"(expected {STORE_MAGIC!r})"
        )
    d = json.loads(body)
    warnings = []
    if expect_fingerprint and d.get("fingerprint") != expect_fingerprint:
        warnings.append(
            f"baseline was saved under grammar {d.get('fingerprint')}, "
            f"current grammar is {expect_fingerprint}"
        )
    return result_from_dict(d, warnings)


def has_baseline(sentence, store_dir):
    return os.path.exists(os.path.join(store_dir, _sentence_key(sentence) + ".json"))
