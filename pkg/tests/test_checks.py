import random
import time

import pytest

from grambench.checks import (
    check_alias_cycles,
    check_left_recursion,
    check_lp_cycles,
    check_wellformedness,
    run_checks,
)
from grambench.featstruct import FeatStruct
from grambench.grammar import (
    AliasDef,
    CategorySpec,
    LPConstraint,
    parse_grammar,
)
from oracles import oracle_left_recursive, prods_to_source, random_recursive_prods

RULES_12 = (
    "S -> NP[X], VP[X] | X = [kas=nom].\n"
    "NP[kas=K] -> Det[kas=K, num=N], (AdjP[kas=K, num=N]), N[kas=K, num=N].\n"
)


def grammar(text, formalism="DCG"):
    return parse_grammar(text, formalism=formalism)


def test_direct_left_recursion():
    findings = check_left_recursion(grammar("S -> S, NP.\nNP -> 'x'."))
    assert [f.witness for f in findings] == [("S",)]
    assert findings[0].severity == "error"


def test_indirect_left_recursion():
    findings = check_left_recursion(grammar("A -> B, 'x'.\nB -> A, 'y'."))
    assert [f.witness for f in findings] == [("A", "B")]


def test_optional_prefix_is_a_left_corner():
    g = grammar("NP -> (AdjP), NP2.\nAdjP -> NP, 'er'.\nNP2 -> 'n'.")
    findings = check_left_recursion(g)
    assert [f.witness for f in findings] == [("AdjP", "NP")]


def test_rules_1_and_2_have_no_left_recursion():
    findings = check_left_recursion(grammar(RULES_12, formalism="IDLP"))
    assert findings == []


def test_epsilon_and_nullable_are_transparent():
    # B derives the empty string, so A's left corners include A itself.
    g = grammar("A -> B, A.\nB -> EPSILON.\nA -> 'x'.")
    findings = check_left_recursion(g)
    assert ("A",) in [f.witness for f in findings]


def test_leading_terminal_blocks_left_corner():
    findings = check_left_recursion(grammar("A -> 'x', A."))
    assert findings == []


def test_lp_cycles():
    lp = [LPConstraint("Det", "N"), LPConstraint("N", "AdjP"), LPConstraint("AdjP", "Det")]
    findings = check_lp_cycles(lp)
    assert [f.witness for f in findings] == [("AdjP", "Det", "N")]
    assert check_lp_cycles([LPConstraint("Det", "AdjP"), LPConstraint("AdjP", "N")]) == []
    assert check_lp_cycles([]) == []


def test_alias_cycles():
    a = AliasDef("A", CategorySpec("A"))
    assert [f.witness for f in check_alias_cycles([a])] == [("A",)]
    pair = [AliasDef("A", CategorySpec("B")), AliasDef("B", CategorySpec("A"))]
    assert [f.witness for f in check_alias_cycles(pair)] == [("A", "B")]
    ok = [AliasDef("A", CategorySpec("B")),
          AliasDef("B", CategorySpec("NP", FeatStruct({"kas": "nom"})))]
    assert check_alias_cycles(ok) == []


def test_wellformedness_undefined():
    g = grammar("S -> NP[X], VP[X] | X = [kas=nom].")
    findings = check_wellformedness(g, preterminals=set())
    undefined = [f.witness[0] for f in findings if f.kind == "undefined_symbol"]
    assert undefined == ["NP", "VP"]
    assert all(f.severity == "warning" for f in findings)


def test_wellformedness_rules_1_2_without_preterminals():
    g = grammar(RULES_12, formalism="IDLP")
    findings = check_wellformedness(g, preterminals=set())
    undefined = sorted(f.witness[0] for f in findings if f.kind == "undefined_symbol")
    assert undefined == ["AdjP", "Det", "N", "VP"]


def test_wellformedness_preterminals_count_as_defined():
    g = grammar(RULES_12, formalism="IDLP")
    findings = check_wellformedness(
        g, preterminals={"Det", "AdjP", "N", "VP"}
    )
    assert [f for f in findings if f.kind == "undefined_symbol"] == []


def test_wellformedness_skipped_when_preterminals_unknown():
    g = grammar(RULES_12, formalism="IDLP")
    findings = check_wellformedness(g, preterminals=None)
    assert [f for f in findings if f.kind == "undefined_symbol"] == []


def test_wellformedness_unreachable():
    g = grammar("S -> NP.\nNP -> 'n'.\nX -> 'x'.")
    findings = check_wellformedness(g, preterminals=None)
    assert [f.witness[0] for f in findings if f.kind == "unreachable_symbol"] == ["X"]


def test_report_ordering_deterministic():
    g = grammar("S -> S.\nB -> B.\nX -> 'x'.")
    report = run_checks(g, preterminals=set())
    kinds = [f.kind for f in report.findings]
    assert kinds == sorted(kinds)
    witnesses = [f.witness for f in report.findings if f.kind == "left_recursion"]
    assert witnesses == sorted(witnesses)


def test_report_serializes():
    g = grammar("S -> S.")
    report = run_checks(g, preterminals=None)
    d = report.to_json_dict()
    assert d["findings"][0]["kind"] == "left_recursion"
    assert "left recursion" in report.to_text()
    assert run_checks(grammar("S -> 'x'."), preterminals=None).to_text() == "no findings"


def _prods_of_grammar(g):
    prods = {}
    for rule in g.resolved_rules():
        items = []
        for item in rule.rhs:
            if item.kind == "empty":
                items.append(("eps",))
            elif item.kind == "terminal":
                items.append(("term", item.symbol))
            else:
                items.append(("cat", item.symbol, item.optional, {}))
        prods.setdefault(rule.lhs.symbol, []).append(items)
    return prods


def test_detector_matches_derivation_oracle_on_random_grammars():
    rng = random.Random(90125)
    agreements = 0
    for _ in range(300):
        prods = random_recursive_prods(rng, max_symbols=8)
        g = parse_grammar(prods_to_source(prods))
        flagged = bool(check_left_recursion(g))
        oracle = oracle_left_recursive(_prods_of_grammar(g), depth_cap=12)
        assert flagged == oracle
        agreements += 1
    assert agreements == 300


def test_checks_fast_on_larger_grammar():
    lines = []
    for i in range(500):
        lines.append(f"R{i} -> R{i + 1}, 'x'.")
    lines.append("R500 -> 'x'.")
    g = parse_grammar("\n".join(lines))
    started = time.perf_counter()
    run_checks(g, preterminals=set())
    assert time.perf_counter() - started < 1.0
