"""Command line workbench.

Exit codes: 0 success, 1 diagnostics reported (load errors, findings,
failed parses, comparison differences), 2 usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import checks as checks_mod
from . import results as results_mod
from . import testsuite
from .errors import EngineError, LeftRecursionError, LoadError
from .featstruct import render_fs
from .grammar import grammar_index, load_grammar, render_index
from .lexicon import BoundLexicon, load_interface_rules, load_lexicon
from .results import compare_readings, render_tree
from .workbench import Config, dispatch_parse

EXIT_OK = 0
EXIT_DIAGNOSTICS = 1
EXIT_USAGE = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="grambench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="load a grammar and run the static checks")
    p.add_argument("grammar")
    p.add_argument("--rules", help="interface rules file (defines the preterminals)")
    p.add_argument("--start", default="S")
    p.add_argument("--json", action="store_true", help="emit the report as JSON")

    p = sub.add_parser("index", help="print the grammar's symbol index")
    p.add_argument("grammar")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("parse", help="parse one sentence")
    p.add_argument("grammar")
    p.add_argument("lexicon")
    p.add_argument("rules")
    p.add_argument("sentence")
    p.add_argument("--engine", choices=["chart", "td"])
    p.add_argument("--start", default="S")
    p.add_argument("--trace", help="comma separated category filter for tracing")
    p.add_argument(
        "--format",
        choices=["tree", "features", "json"],
        default="tree",
        dest="fmt",
    )
    p.add_argument(
        "--compare-readings",
        nargs=2,
        type=int,
        metavar=("I", "J"),
        help="compare two readings of this sentence with each other",
    )

    p = sub.add_parser("suite", help="test suite operations")
    suite_sub = p.add_subparsers(dest="suite_command", required=True)
    r = suite_sub.add_parser("run", help="run phenomenon class files")
    r.add_argument("grammar")
    r.add_argument("lexicon")
    r.add_argument("rules")
    r.add_argument("suites", nargs="+")
    r.add_argument("--engine", choices=["chart", "td"])
    r.add_argument("--start", default="S")
    r.add_argument("--tags", help="only cases carrying all these comma separated tags")
    r.add_argument("--compare", action="store_true", help="compare against baselines")
    r.add_argument("--save-baselines", action="store_true")
    r.add_argument("--store", help="baseline store directory")
    r.add_argument("--workers", type=int)
    r.add_argument(
        "--format", choices=["table", "dsv", "json"], default="table", dest="fmt"
    )

    p = sub.add_parser("baseline", help="save or compare single-sentence baselines")
    base_sub = p.add_subparsers(dest="baseline_command", required=True)
    for name in ("save", "compare"):
        b = base_sub.add_parser(name)
        b.add_argument("grammar")
        b.add_argument("lexicon")
        b.add_argument("rules")
        b.add_argument("sentence")
        b.add_argument("--store", required=True)
        b.add_argument("--engine", choices=["chart", "td"])
        b.add_argument("--start", default="S")

    p = sub.add_parser("serve", help="run the local JSON service")
    p.add_argument("--port", type=int)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--config")

    return parser


def _load_components(args, err):
    grammar = load_grammar(args.grammar, start=args.start)
    lexicon = load_lexicon(args.lexicon)
    rules = load_interface_rules(args.rules, formalism=grammar.formalism)
    for w in rules.warnings:
        print(str(w), file=err)
    # Checks run automatically at every load; findings go to the error stream.
    report = checks_mod.run_checks(
        grammar, preterminals=set(rules.target_symbols())
    )
    for finding in report.findings:
        print(f"{finding.severity}: {finding.message}", file=err)
    return grammar, BoundLexicon(lexicon, rules)


def cmd_check(args, out, err):
    grammar = load_grammar(args.grammar, start=args.start)
    preterminals = None
    if args.rules:
        preterminals = set(load_interface_rules(args.rules).target_symbols())
    report = checks_mod.run_checks(grammar, preterminals=preterminals)
    print(report.to_json() if args.json else report.to_text(), file=out)
    return EXIT_OK if not report.findings else EXIT_DIAGNOSTICS


def cmd_index(args, out, err):
    grammar = load_grammar(args.grammar)
    index = grammar_index(grammar)
    if args.json:
        payload = {sym: e.to_json_dict() for sym, e in index.items()}
        print(json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True), file=out)
    else:
        print(render_index(index), file=out)
    return EXIT_OK


def _parse_payload(outcome):
    result = outcome.result
    payload = {
        "sentence": result.sentence,
        "tokens": list(result.tokens),
        "engine": result.engine,
        "fingerprint": result.fingerprint,
        "readings": [
            {
                "tree": json.loads(render_tree(r.tree, "json")),
                "fstructure": render_fs(r.fstructure) if r.fstructure else None,
            }
            for r in result.readings
        ],
        "warnings": list(result.warnings),
    }
    if outcome.fragments is not None:
        payload["fragments"] = outcome.fragments.to_json_dict()
        payload["paths"] = [p.to_json_dict() for p in outcome.paths or []]
    return payload


def cmd_parse(args, out, err):
    grammar, blex = _load_components(args, err)
    trace_filter = None
    if args.trace is not None:
        trace_filter = frozenset(t for t in args.trace.split(",") if t)
    outcome = dispatch_parse(
        grammar,
        blex,
        args.sentence,
        engine=args.engine,
        start=args.start,
        trace_filter=trace_filter,
    )
    result = outcome.result
    if trace_filter is not None:
        for event in outcome.trace:
            print(
                event.render()
                if hasattr(event, "render")
                else json.dumps(event.to_json_dict(), ensure_ascii=False),
                file=err,
            )
    for w in result.warnings:
        print(f"warning: {w}", file=err)
    if args.compare_readings:
        i, j = args.compare_readings
        if max(i, j) >= result.reading_count:
            print(
                f"error: sentence has {result.reading_count} readings; cannot "
                f"compare {i} and {j}",
                file=err,
            )
            return EXIT_DIAGNOSTICS
        report = compare_readings(result.readings[i], result.readings[j])
        print(report.render(), file=out)
        return EXIT_OK
    if args.fmt == "json":
        print(json.dumps(_parse_payload(outcome), ensure_ascii=False, indent=2,
                         sort_keys=True), file=out)
    else:
        print(f"{result.reading_count} reading(s)", file=out)
        for k, reading in enumerate(result.readings):
            mode = "indented_features" if args.fmt == "features" else "ascii_tree"
            print(f"-- reading {k}", file=out)
            print(render_tree(reading.tree, mode), file=out)
            if reading.fstructure is not None:
                print("f-structure:", file=out)
                print(render_fs(reading.fstructure, "indented"), file=out)
    if not result.readings:
        if outcome.fragments is not None and args.fmt != "json":
            print(outcome.fragments.render(result.tokens), file=out)
            if outcome.paths:
                print("shortest chart paths:", file=out)
                for path in outcome.paths:
                    print("  " + " . ".join(path.labels()), file=out)
        return EXIT_DIAGNOSTICS
    return EXIT_OK


def cmd_suite_run(args, out, err):
    grammar, blex = _load_components(args, err)
    classes = []
    for path in args.suites:
        cls = testsuite.load_class(path)
        for w in cls.warnings:
            print(str(w), file=err)
        classes.append(cls)
    if args.tags:
        tags = {t for t in args.tags.split(",") if t}
        cases, warnings = testsuite.select_cases(classes, tags)
        for w in warnings:
            print(f"warning: {w}", file=err)
        keep = {c.sentence for c in cases}
        classes = [
            testsuite.TestClass(c.phenomenon, c.path,
                                [x for x in c.cases if x.sentence in keep])
            for c in classes
        ]
    config = testsuite.RunConfig(
        engine=args.engine or ("chart" if grammar.formalism in ("IDLP", "GPSG") else "td"),
        start=args.start,
        compare_to_baseline=args.compare,
        save_baselines=args.save_baselines,
        store_dir=args.store,
        workers=args.workers,
    )
    table = testsuite.run_suite(classes, grammar, blex, config)
    if args.fmt == "json":
        print(json.dumps(table.to_json_dict(), ensure_ascii=False, indent=2,
                         sort_keys=True), file=out)
    elif args.fmt == "dsv":
        print(table.to_dsv(), file=out)
    else:
        print(table.render(), file=out)
    totals = table.totals
    return EXIT_OK if totals["fail"] == 0 and totals["error"] == 0 else EXIT_DIAGNOSTICS


def cmd_baseline(args, out, err):
    grammar, blex = _load_components(args, err)
    outcome = dispatch_parse(
        grammar, blex, args.sentence, engine=args.engine, start=args.start,
        trace_filter=frozenset(),
    )
    if args.baseline_command == "save":
        path = results_mod.save_result(outcome.result, args.store)
        print(f"saved {outcome.result.reading_count} reading(s) to {path}", file=out)
        return EXIT_OK
    saved = results_mod.load_result(args.sentence, args.store, grammar.fingerprint)
    for w in saved.warnings:
        print(f"warning: {w}", file=err)
    comparison = results_mod.compare_results(saved, outcome.result)
    print(comparison.render(), file=out)
    return EXIT_OK if comparison.verdict == "equal" else EXIT_DIAGNOSTICS


def cmd_serve(args, out, err):
    import uvicorn

    from .service import create_app

    config = Config.load(args.config)
    if args.port:
        config.port = args.port
    app = create_app(config)
    uvicorn.run(app, host=args.host, port=config.port)
    return EXIT_OK


def main(argv=None, out=None, err=None):
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    try:
        if args.command == "check":
            return cmd_check(args, out, err)
        if args.command == "index":
            return cmd_index(args, out, err)
        if args.command == "parse":
            return cmd_parse(args, out, err)
        if args.command == "suite":
            return cmd_suite_run(args, out, err)
        if args.command == "baseline":
            return cmd_baseline(args, out, err)
        if args.command == "serve":
            return cmd_serve(args, out, err)
    except LoadError as exc:
        for d in exc.diagnostics:
            print(str(d), file=err)
        return EXIT_DIAGNOSTICS
    except LeftRecursionError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_DIAGNOSTICS
    except (EngineError, results_mod.BaselineMissing,
            results_mod.StoreFormatError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_DIAGNOSTICS
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
