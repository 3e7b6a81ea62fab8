"""grambench: a workbench for developing and testing feature-structure grammars.

Write rules in ID/LP or DCG notation (plus annotated rules for functional
structures), check them statically, parse with a bottom-up chart parser or
a top-down depth-first parser, attach lexicons through interface rules, and
regression-test parses with a three-level comparison tool.
"""

from .featstruct import (
    FeatStruct,
    Var,
    parse_fs,
    render_fs,
    resolve,
    subsumes,
    unify,
)
from .grammar import (
    Grammar,
    GrammarRule,
    grammar_index,
    load_grammar,
    parse_grammar,
    resolve_alias,
)
from .checks import CheckReport, run_checks
from .lexicon import (
    BoundLexicon,
    Lexicon,
    apply_interface_rules,
    load_interface_rules,
    load_lexicon,
    lookup,
    parse_interface_rules,
    parse_lexicon,
)
from .chart_parser import Chart, chart_trace, parse_chart
from .td_parser import TraceControl, parse_topdown, solve_fstructure
from .results import (
    ParseResult,
    ParseTree,
    Reading,
    compare_results,
    compare_trees,
    load_result,
    render_tree,
    save_result,
)
from .diagnostics import largest_fragments, shortest_paths
from .testsuite import RunConfig, load_class, run_suite, select_cases
from .workbench import Config, SessionManager, dispatch_parse

__version__ = "0.1.0"

__all__ = [
    "FeatStruct", "Var", "parse_fs", "render_fs", "resolve", "subsumes", "unify",
    "Grammar", "GrammarRule", "grammar_index", "load_grammar", "parse_grammar",
    "resolve_alias", "CheckReport", "run_checks",
    "BoundLexicon", "Lexicon", "apply_interface_rules", "load_interface_rules",
    "load_lexicon", "lookup", "parse_interface_rules", "parse_lexicon",
    "Chart", "chart_trace", "parse_chart",
    "TraceControl", "parse_topdown", "solve_fstructure",
    "ParseResult", "ParseTree", "Reading", "compare_results", "compare_trees",
    "load_result", "render_tree", "save_result",
    "largest_fragments", "shortest_paths",
    "RunConfig", "load_class", "run_suite", "select_cases",
    "Config", "SessionManager", "dispatch_parse",
]
