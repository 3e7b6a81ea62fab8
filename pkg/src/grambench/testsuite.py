"""Flat phenomenon-class test suite files, batch runs, and reading-count tables.

A suite file holds one phenomenon class: a ``%PHENOMENON name`` header and
one test case per line.  A case is an optional ``*`` (ungrammatical), the
sentence, an optional ``| n`` expected reading count, and any number of
trailing ``@tag`` annotations:

    * Hund der schläft | 0 @order

Sweeps fan sentences out to a bounded worker pool, deliver progress row by
row, and never abort on a single sentence's failure.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .errors import Diagnostic, LoadError, SourceLoc
from . import results as results_mod


@dataclass(frozen=True)
class TestCase:
    __test__ = False  # not a pytest class, despite the name

    sentence: str
    good: bool = True
    expected_readings: int | None = None
    tags: tuple[str, ...] = ()
    loc: SourceLoc = field(default_factory=SourceLoc, compare=False)


@dataclass
class TestClass:
    __test__ = False  # not a pytest class, despite the name

    phenomenon: str
    path: str
    cases: list
    warnings: list = field(default_factory=list)


def parse_class(text, file="<string>"):
    """Parse one phenomenon-class file; atomic with positioned diagnostics."""
    diags = []
    phenomenon = None
    cases = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("//", 1)[0].strip()
        if not line:
            continue
        loc = SourceLoc(file, lineno, 1)
        if line.startswith("%"):
            directive, _, rest = line[1:].partition(" ")
            if directive == "PHENOMENON":
                phenomenon = rest.strip()
                if not phenomenon:
                    diags.append(
                        Diagnostic("error", "%PHENOMENON needs a name", loc)
                    )
            else:
                diags.append(
                    Diagnostic("error", f"unknown directive %{directive}", loc)
                )
            continue
        good = True
        if line.startswith("*"):
            good = False
            line = line[1:].strip()
        tags = []
        words = line.split()
        while words and words[-1].startswith("@"):
            tag = words.pop()[1:]
            if not tag:
                diags.append(Diagnostic("error", "empty @tag annotation", loc))
            tags.append(tag)
        tags.reverse()
        line = " ".join(words)
        expected = None
        if "|" in line:
            line, _, count_text = line.rpartition("|")
            line = line.strip()
            count_text = count_text.strip()
            if not count_text.isdigit():
                diags.append(
                    Diagnostic(
                        "error", f"expected reading count must be a number, got "
                        f"{count_text!r}", loc
                    )
                )
                continue
            expected = int(count_text)
        if not line:
            diags.append(Diagnostic("error", "test case has no sentence", loc))
            continue
        if not good and expected not in (None, 0):
            diags.append(
                Diagnostic(
                    "error",
                    f"ungrammatical sentence cannot expect {expected} readings",
                    loc,
                )
            )
            continue
        if line in seen:
            diags.append(Diagnostic("warning", f"duplicate sentence: {line!r}", loc))
        seen.add(line)
        cases.append(TestCase(line, good, expected, tuple(tags), loc))
    if phenomenon is None:
        stem = os.path.splitext(os.path.basename(file))[0]
        phenomenon = stem if stem != "<string>" else "unnamed"
        diags.append(
            Diagnostic(
                "warning",
                f"missing %PHENOMENON header; class named {phenomenon!r} "
                f"after the file",
                SourceLoc(file, 1, 1),
            )
        )
    if not cases:
        diags.append(
            Diagnostic("warning", "phenomenon class contains no sentences",
                       SourceLoc(file, 1, 1))
        )
    errors = [d for d in diags if d.severity == "error"]
    if errors:
        raise LoadError(diags)
    warnings = [d for d in diags if d.severity == "warning"]
    return TestClass(phenomenon, file, cases, warnings)


def load_class(path):
    with open(path, encoding="utf-8") as f:
        return parse_class(f.read(), file=str(path))


def select_cases(classes, tags):
    """Cases carrying all of the requested tags (set intersection).

    Returns (cases, warnings); asking for a tag no case carries yields an
    empty selection and a warning.
    """
    tags = set(tags)
    all_cases = [c for cls in classes for c in cls.cases]
    if not tags:
        return all_cases, []
    known = set()
    for c in all_cases:
        known.update(c.tags)
    warnings = [f"unknown tag: {t!r}" for t in sorted(tags - known)]
    if tags - known:
        return [], warnings
    return [c for c in all_cases if tags <= set(c.tags)], warnings


@dataclass
class SuiteRow:
    phenomenon: str
    sentence: str
    good: bool
    expected_readings: int | None
    readings: int | None = None
    status: str = "pending"  # "pass" | "fail" | "error"
    verdict: str | None = None  # baseline comparison verdict, if requested
    error: str | None = None
    elapsed_ms: float = 0.0

    def to_json_dict(self):
        return {
            "phenomenon": self.phenomenon,
            "sentence": self.sentence,
            "good": self.good,
            "expected_readings": self.expected_readings,
            "readings": self.readings,
            "status": self.status,
            "verdict": self.verdict,
            "error": self.error,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }


@dataclass
class SuiteRunTable:
    rows: list

    @property
    def totals(self):
        out = {"pass": 0, "fail": 0, "error": 0}
        for r in self.rows:
            out[r.status] += 1
        return out

    def render(self):
        widths = [30, 8, 9, 8, 12]
        header = ["sentence", "expect", "readings", "status", "verdict"]
        lines = [" | ".join(h.ljust(w) for h, w in zip(header, widths))]
        lines.append("-+-".join("-" * w for w in widths))
        for r in self.rows:
            expect = "bad" if not r.good else (
                str(r.expected_readings) if r.expected_readings is not None else ">=1"
            )
            cells = [
                r.sentence[:30],
                expect,
                "" if r.readings is None else str(r.readings),
                r.status,
                r.verdict or "",
            ]
            lines.append(" | ".join(c.ljust(w) for c, w in zip(cells, widths)))
        t = self.totals
        lines.append(f"pass {t['pass']}, fail {t['fail']}, error {t['error']}")
        return "\n".join(lines)

    def to_dsv(self, sep="\t"):
        header = ["phenomenon", "sentence", "expected", "readings", "status",
                  "verdict", "elapsed_ms"]
        lines = [sep.join(header)]
        for r in self.rows:
            expect = "bad" if not r.good else (
                str(r.expected_readings) if r.expected_readings is not None else ""
            )
            lines.append(
                sep.join(
                    [
                        r.phenomenon,
                        r.sentence,
                        expect,
                        "" if r.readings is None else str(r.readings),
                        r.status,
                        r.verdict or "",
                        f"{r.elapsed_ms:.3f}",
                    ]
                )
            )
        return "\n".join(lines)

    def to_json_dict(self):
        return {"rows": [r.to_json_dict() for r in self.rows], "totals": self.totals}


@dataclass
class RunConfig:
    engine: str = "chart"
    start: str | None = None
    compare_to_baseline: bool = False
    save_baselines: bool = False
    store_dir: str | None = None
    workers: int | None = None


def _expectation_met(case, count):
    if case.expected_readings is not None:
        return count == case.expected_readings
    return count > 0 if case.good else count == 0


def run_suite(classes, grammar, lexicon, config=None, progress=None):
    """Run every case through the parser; one row per case, in case order.

    ``progress`` is called with each finished SuiteRow as it completes
    (possibly out of order); the returned table is always in case order.
    A failing sentence produces an error row, never an aborted sweep.
    """
    from .workbench import dispatch_parse  # late import; avoids a cycle

    config = config or RunConfig()
    cases = [(cls, case) for cls in classes for case in cls.cases]
    rows = [
        SuiteRow(cls.phenomenon, case.sentence, case.good, case.expected_readings)
        for cls, case in cases
    ]

    def run_one(index):
        cls, case = cases[index]
        row = rows[index]
        started = time.perf_counter()
        try:
            outcome = dispatch_parse(
                grammar,
                lexicon,
                case.sentence,
                engine=config.engine,
                start=config.start,
                trace_filter=frozenset(),
            )
            result = outcome.result
            row.readings = result.reading_count
            row.status = "pass" if _expectation_met(case, result.reading_count) else "fail"
            if config.store_dir and config.compare_to_baseline:
                if results_mod.has_baseline(case.sentence, config.store_dir):
                    saved = results_mod.load_result(
                        case.sentence, config.store_dir, grammar.fingerprint
                    )
                    row.verdict = results_mod.compare_results(saved, result).verdict
                else:
                    row.verdict = "no_baseline"
            if config.store_dir and config.save_baselines:
                results_mod.save_result(result, config.store_dir)
        except Exception as exc:  # a bad sentence must not sink the sweep
            row.status = "error"
            row.error = f"{type(exc).__name__}: {exc}"
        row.elapsed_ms = (time.perf_counter() - started) * 1000.0
        if progress is not None:
            progress(row)
        return row

    workers = config.workers or min(8, os.cpu_count() or 1)
    if workers <= 1:
        for i in range(len(cases)):
            run_one(i)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run_one, range(len(cases))))
    return SuiteRunTable(rows)
