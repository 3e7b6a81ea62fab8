"""Session and configuration management plus the engine dispatch shared by
the CLI, the JSON service, and suite sweeps."""

from __future__ import annotations

import os
import threading
import time
import uuid
from dataclasses import dataclass, field

from . import diagnostics
from .chart_parser import parse_chart
from .errors import EngineError
from .results import Reading, make_result
from .td_parser import TraceControl, parse_topdown

CONFIG_ENV = "GRAMBENCH_CONFIG"
DEFAULT_SESSION_IDLE = 30 * 60.0

ENGINE_FOR_FORMALISM = {"DCG": "td", "LFG": "td", "IDLP": "chart", "GPSG": "chart"}
ENGINES = ("chart", "td")


@dataclass
class Config:
    store_dir: str = "baselines"
    suite_dir: str = "suite"
    default_engine: str = ""
    workers: int = 0
    port: int = 8472
    ui_dir: str = ""
    session_idle: float = DEFAULT_SESSION_IDLE

    @classmethod
    def load(cls, path=None):
        """Read a key=value config file; missing file means defaults."""
        path = path or os.environ.get(CONFIG_ENV)
        config = cls()
        if not path or not os.path.exists(path):
            return config
        with open(path, encoding="utf-8") as f:
            for raw in f:
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(f"{path}: malformed config line {line!r}")
                key, _, value = line.partition("=")
                key, value = key.strip(), value.strip()
                if key in ("workers", "port"):
                    setattr(config, key, int(value))
                elif key == "session_idle":
                    config.session_idle = float(value)
                elif hasattr(config, key):
                    setattr(config, key, value)
                else:
                    raise ValueError(f"{path}: unknown config key {key!r}")
        return config

    def to_json_dict(self):
        return {
            "store_dir": self.store_dir,
            "suite_dir": self.suite_dir,
            "default_engine": self.default_engine,
            "workers": self.workers,
            "port": self.port,
        }


def engine_for(grammar, requested=None):
    """Pick and validate an engine for a grammar's formalism."""
    engine = requested or ENGINE_FOR_FORMALISM[grammar.formalism]
    if engine not in ENGINES:
        raise EngineError(f"unknown engine {engine!r}; expected chart or td")
    if engine == "chart" and grammar.formalism == "LFG":
        raise EngineError("LFG grammars require the top-down engine")
    return engine


@dataclass
class ParseOutcome:
    result: object  # ParseResult
    engine: str
    chart: object = None
    wfst: object = None
    trace: list = field(default_factory=list)
    fragments: object = None
    paths: list = None  # shortest chart paths, computed with the fragments
    aborted: bool = False


def dispatch_parse(grammar, lexicon, sentence, engine=None, start=None,
                   trace_filter=None, control=None, trace_sink=None):
    """Parse one sentence with the chosen engine.

    Produces a ParseResult plus the engine's artifacts; when there are no
    readings the fragment report is computed automatically.
    """
    tokens = sentence.split()
    if not tokens:
        raise EngineError("sentence is empty")
    engine = engine_for(grammar, engine)
    start_symbol = start or grammar.start
    if engine == "chart":
        parse = parse_chart(tokens, grammar, lexicon, start=start_symbol)
        readings = tuple(Reading(t) for t in parse.readings)
        outcome = ParseOutcome(
            result=make_result(sentence, tokens, readings, "chart", grammar.fingerprint),
            engine="chart",
            chart=parse.chart,
        )
        labels = trace_filter
        if labels is None and control is not None:
            labels = control.filter
        if labels is not None:
            from .chart_parser import chart_trace

            outcome.trace = chart_trace(parse.chart, labels=set(labels))
        edges = diagnostics.chart_view(parse.chart)
    else:
        if control is None:
            control = TraceControl(filter=trace_filter)
        elif trace_filter is not None:
            control.set_filter(trace_filter)
        parse = parse_topdown(
            tokens, grammar, lexicon, start=start_symbol, control=control,
            trace_sink=trace_sink,
        )
        readings = tuple(
            Reading(tree, fs) for tree, fs in zip(parse.readings, parse.fstructures)
        )
        result = make_result(sentence, tokens, readings, "td", grammar.fingerprint)
        if parse.aborted:
            result.warnings = result.warnings + ("parse aborted by trace control",)
        for _, report in parse.rejected:
            result.warnings = result.warnings + (
                f"reading rejected: {report.message}",
            )
        outcome = ParseOutcome(
            result=result,
            engine="td",
            wfst=parse.wfst,
            trace=parse.trace,
            aborted=parse.aborted,
        )
        edges = diagnostics.wfst_view(parse.wfst)
    if not outcome.result.readings:
        # Failed parses always get both kinds of feedback.
        outcome.fragments = diagnostics.largest_fragments(edges, tokens)
        outcome.paths = diagnostics.shortest_paths(edges, tokens)
    return outcome


@dataclass
class Session:
    id: str
    grammar: object = None
    lexicon: object = None  # BoundLexicon
    engine: str | None = None
    trace_filter: object = None
    breakpoints: frozenset = frozenset()
    control: object = None
    last_outcome: ParseOutcome | None = None
    check_report: object = None
    touched: float = field(default_factory=time.time)

    def touch(self):
        self.touched = time.time()


class SessionManager:
    """In-memory sessions with idle expiry; nothing survives a restart."""

    def __init__(self, idle=DEFAULT_SESSION_IDLE):
        self.idle = idle
        self._sessions = {}
        self._lock = threading.Lock()

    def create(self):
        session = Session(uuid.uuid4().hex[:12])
        with self._lock:
            self._sessions[session.id] = session
        return session

    def get(self, session_id):
        with self._lock:
            self._expire()
            session = self._sessions.get(session_id)
            if session is None:
                raise KeyError(f"no such session: {session_id!r}")
            session.touch()
            return session

    def _expire(self):
        now = time.time()
        dead = [
            sid
            for sid, s in self._sessions.items()
            if now - s.touched > self.idle
        ]
        for sid in dead:
            del self._sessions[sid]

    def __len__(self):
        with self._lock:
            self._expire()
            return len(self._sessions)
