import json
import random

import pytest

from grambench.featstruct import FeatStruct, Var, parse_fs
from grambench.results import (
    BaselineMissing,
    ParseResult,
    ParseTree,
    Reading,
    canonical_result_json,
    compare_results,
    compare_trees,
    load_result,
    make_result,
    render_tree,
    result_from_dict,
    result_to_dict,
    save_result,
    tree_from_dict,
    tree_to_dict,
)
from oracles import mutate_tree, random_tree


def leaf(word, span=(0, 1)):
    return ParseTree(word, FeatStruct.EMPTY, (), span)


def node(label, children, feats=None, span=(0, 1)):
    return ParseTree(label, parse_fs(feats) if feats else FeatStruct.EMPTY,
                     tuple(children), span)


def test_identical_trees_equal():
    t = node("S", [node("NP", [leaf("der")]), node("VP", [leaf("geht")])])
    assert compare_trees(t, t).verdict == "equal"


def test_arity_mismatch_is_shape_diff_at_root():
    a = node("A", [node("B", []), node("C", [])])
    b = node("A", [node("B", [node("C", [])])])
    report = compare_trees(a, b)
    assert report.verdict == "shape_diff"
    assert report.path == ()


def test_label_diff_reported_before_features():
    a = node("S", [node("NP", [], "[kas=nom]")])
    b = node("S", [node("N", [], "[kas=akk]")])
    report = compare_trees(a, b)
    assert report.verdict == "label_diff"
    assert report.path == (0,)
    assert report.detail == {"label_a": "NP", "label_b": "N"}


def test_feature_diff_with_feature_path():
    a = node("S", [node("NP", [], "[kas=nom]")])
    b = node("S", [node("NP", [], "[kas=akk]")])
    report = compare_trees(a, b)
    assert report.verdict == "feature_diff"
    assert report.path == (0,)
    assert report.detail["feature_path"] == "kas"


def test_feature_equality_is_mutual_subsumption():
    a = node("NP", [], "[kas=K, num=K]")
    b = node("NP", [], "[kas=L, num=L]")
    c = node("NP", [], "[kas=L, num=M]")
    assert compare_trees(a, b).verdict == "equal"
    assert compare_trees(a, c).verdict == "feature_diff"


def test_compare_is_symmetric_in_verdict_and_location():
    rng = random.Random(11)
    for _ in range(100):
        t = random_tree(rng)
        m, kind, path = mutate_tree(rng, t)
        fwd = compare_trees(t, m)
        rev = compare_trees(m, t)
        assert fwd.verdict == rev.verdict
        assert fwd.path == rev.path


def test_seeded_mutations_identified_exactly():
    rng = random.Random(12)
    for _ in range(200):
        t = random_tree(rng)
        mutated, kind, path = mutate_tree(rng, t)
        report = compare_trees(t, mutated)
        expected = {"shape": "shape_diff", "label": "label_diff",
                    "feature": "feature_diff"}[kind]
        assert report.verdict == expected, (kind, path, report)
        assert report.path == path


def result_with(readings, sentence="der Hund schläft", fingerprint="abc"):
    return ParseResult(
        sentence,
        tuple(sentence.split()),
        tuple(Reading(t) for t in readings),
        "chart",
        fingerprint,
        timestamp=1723200000.0,
    )


def test_additional_reading_policy():
    t1 = node("S", [leaf("a")])
    t2 = node("S", [leaf("b")])
    t3 = node("S", [leaf("c")])
    old = result_with([t1, t2])
    new = result_with([t1, t2, t3])
    comparison = compare_results(old, new)
    assert len(comparison.reports) == 2
    assert all(r.verdict == "equal" for r in comparison.reports)
    assert comparison.summary == "1 additional reading"
    assert comparison.verdict == "reading_count_diff"


def test_missing_reading_policy():
    t1 = node("S", [leaf("a")])
    old = result_with([t1])
    new = result_with([])
    comparison = compare_results(old, new)
    assert comparison.reports == []
    assert comparison.summary == "1 missing reading"


def test_single_pair_feature_drift():
    a = node("S", [node("NP", [], "[kas=nom]")])
    b = node("S", [node("NP", [], "[kas=akk]")])
    comparison = compare_results(result_with([a]), result_with([b]))
    assert comparison.verdict == "feature_diff"
    assert len(comparison.reports) == 1


def test_sentence_mismatch_refused():
    with pytest.raises(ValueError):
        compare_results(
            result_with([], sentence="a b"), result_with([], sentence="a c")
        )


def test_comparison_render_is_deterministic():
    t1 = node("S", [leaf("a")])
    old = result_with([t1, t1])
    new = result_with([t1, t1, t1])
    first = compare_results(old, new).render()
    second = compare_results(old, new).render()
    assert first == second
    assert "1 additional reading" in first


# ---------------------------------------------------------------------------
# rendering


def test_render_single_node():
    assert render_tree(leaf("wort")) == "wort"


def test_render_ascii_labels_only():
    t = node("S", [node("NP", [leaf("der"), leaf("Hund")]), node("VP", [leaf("geht")])])
    text = render_tree(t, "ascii_tree")
    assert "S" in text.splitlines()[0]
    assert "[" not in text
    assert any("NP" in line for line in text.splitlines())


def test_render_indented_features_preterminal_lines():
    t = node(
        "NP",
        [
            node("Det", [leaf("der")], "[kas=nom, num=sg]"),
            node("N", [leaf("Hund")], "[kas=nom, num=sg]"),
        ],
        "[kas=nom]",
    )
    lines = render_tree(t, "indented_features").splitlines()
    assert len(lines) == 3
    assert all(line.rstrip().endswith("]") for line in lines)
    assert lines[0] == "NP [kas=nom]"
    assert lines[1] == "    Det 'der' [kas=nom, num=sg]"


def test_render_json_round_trips():
    rng = random.Random(13)
    for _ in range(50):
        t = random_tree(rng)
        back = tree_from_dict(json.loads(render_tree(t, "json")))
        assert compare_trees(t, back).verdict == "equal"


def test_tree_dict_round_trip_with_variables():
    t = node("NP", [], "[kas=K, num=K]")
    back = tree_from_dict(tree_to_dict(t))
    assert compare_trees(t, back).verdict == "equal"


# ---------------------------------------------------------------------------
# baseline store


def test_store_round_trip(tmp_path):
    rng = random.Random(14)
    readings = [random_tree(rng) for _ in range(2)]
    result = result_with(readings)
    save_result(result, tmp_path)
    loaded = load_result(result.sentence, tmp_path)
    comparison = compare_results(loaded, result)
    assert comparison.verdict == "equal"
    assert all(r.verdict == "equal" for r in comparison.reports)


def test_store_missing_baseline(tmp_path):
    with pytest.raises(BaselineMissing):
        load_result("nie gesehen", tmp_path)


def test_fingerprint_mismatch_warns(tmp_path):
    result = result_with([node("S", [leaf("a")])], fingerprint="old000")
    save_result(result, tmp_path)
    loaded = load_result(result.sentence, tmp_path, expect_fingerprint="new111")
    assert loaded.warnings
    assert "old000" in loaded.warnings[0]
    clean = load_result(result.sentence, tmp_path, expect_fingerprint="old000")
    assert clean.warnings == ()


def test_canonical_serialization_stable():
    rng = random.Random(15)
    result = result_with([random_tree(rng) for _ in range(3)])
    assert canonical_result_json(result) == canonical_result_json(result)
    clone = result_from_dict(result_to_dict(result))
    assert canonical_result_json(clone) == canonical_result_json(result)


def test_canonical_serialization_normalizes_coindices():
    a = node("NP", [], "[kas=K, num=K]")
    b = node("NP", [], "[kas=Q, num=Q]")
    assert canonical_result_json(result_with([a])) == canonical_result_json(
        result_with([b])
    )


def test_store_format_version_checked(tmp_path):
    result = result_with([node("S", [leaf("a")])])
    path = save_result(result, tmp_path)
    with open(path, encoding="utf-8") as f:
        body = f.read()
    assert body.startswith("grambench-baseline 1\n")
    with open(path, "w", encoding="utf-8") as f:
        f.write("other-format 9\n{}")
    from grambench.results import StoreFormatError

    with pytest.raises(StoreFormatError):
        load_result(result.sentence, tmp_path)


def test_level_ordering_instrumented(monkeypatch):
    # When shapes differ, the label and feature levels are never entered.
    import grambench.results as results_module

    def forbidden(*args, **kwargs):
        raise AssertionError("deeper level inspected despite a shape difference")

    monkeypatch.setattr(results_module, "_label_diff", forbidden)
    monkeypatch.setattr(results_module, "_features_diff", forbidden)
    a = node("A", [node("B", []), node("C", [])])
    b = node("A", [node("B", [])])
    assert compare_trees(a, b).verdict == "shape_diff"

    # When labels differ, the feature level is never entered.
    monkeypatch.undo()
    monkeypatch.setattr(results_module, "_features_diff", forbidden)
    c = node("A", [node("B", [], "[kas=nom]")])
    d = node("A", [node("X", [], "[kas=akk]")])
    assert compare_trees(c, d).verdict == "label_diff"


def test_shape_before_labels_never_violated_when_shape_differs():
    rng = random.Random(16)
    for _ in range(100):
        t = random_tree(rng)
        mutated, kind, path = mutate_tree(rng, t)
        if kind != "shape":
            continue
        report = compare_trees(t, mutated)
        assert report.verdict == "shape_diff"
        assert "label_a" not in report.detail
        assert "feature_path" not in report.detail
