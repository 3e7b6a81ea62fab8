"""Local JSON service exposing the workbench to scripts and the browser UI.

All endpoints live under ``/api/v1``.  Responses carry the session id and
the active grammar fingerprint.  Suite runs and streamed parses deliver
progress over a server-sent-event channel.  The service keeps no state
across restarts apart from the baseline store on disk.
"""

from __future__ import annotations

import json
import os
import queue
import threading

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse, StreamingResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import checks as checks_mod
from . import diagnostics
from . import results as results_mod
from . import testsuite
from .errors import EngineError, LeftRecursionError, LoadError
from .featstruct import render_fs
from .grammar import grammar_index, parse_grammar
from .lexicon import BoundLexicon, parse_interface_rules, parse_lexicon
from .results import render_tree
from .td_parser import TraceControl
from .workbench import Config, SessionManager, dispatch_parse


class GrammarBody(BaseModel):
    session: str
    text: str | None = None
    path: str | None = None
    formalism: str | None = None
    start: str = "S"


class LexiconBody(BaseModel):
    session: str
    text: str | None = None
    path: str | None = None
    rules_text: str | None = None
    rules_path: str | None = None


class ParseBody(BaseModel):
    session: str
    sentence: str
    engine: str | None = None
    trace: list[str] | None = None
    stream: bool = False


class TraceControlBody(BaseModel):
    session: str
    filter: list[str] | None = None
    breakpoints: list[str] | None = None
    mode: str | None = None  # "step" | "run" | "abort"
    steps: int = 1


class SentenceBody(BaseModel):
    session: str
    sentence: str
    engine: str | None = None


class SuiteBody(BaseModel):
    session: str
    paths: list[str] | None = None
    texts: list[str] | None = None
    engine: str | None = None
    compare: bool = False
    save_baselines: bool = False
    tags: list[str] | None = None


def _sse(payload):
    return f"data: {json.dumps(payload, ensure_ascii=False)}\n\n"


def _read(path):
    with open(path, encoding="utf-8") as f:
        return f.read()


def create_app(config=None):
    config = config or Config.load()
    sessions = SessionManager(idle=config.session_idle)
    app = FastAPI(title="grambench service", version="1")
    api = "/api/v1"

    def get_session(session_id):
        try:
            return sessions.get(session_id)
        except KeyError:
            raise HTTPException(status_code=404, detail="session not found")

    def need_grammar(session):
        if session.grammar is None:
            raise HTTPException(status_code=409, detail="no grammar loaded")
        return session.grammar

    def need_lexicon(session):
        if session.lexicon is None:
            raise HTTPException(status_code=409, detail="no lexicon loaded")
        return session.lexicon

    def envelope(session, **payload):
        payload["session"] = session.id
        payload["fingerprint"] = (
            session.grammar.fingerprint if session.grammar else None
        )
        return payload

    @app.exception_handler(LoadError)
    async def load_error_handler(request: Request, exc: LoadError):
        return JSONResponse(
            status_code=422,
            content={
                "error": "load_failed",
                "diagnostics": [d.to_json_dict() for d in exc.diagnostics],
            },
        )

    @app.exception_handler(LeftRecursionError)
    async def left_recursion_handler(request: Request, exc: LeftRecursionError):
        return JSONResponse(
            status_code=409,
            content={
                "error": "left_recursion",
                "findings": [f.to_json_dict() for f in exc.findings],
            },
        )

    @app.exception_handler(EngineError)
    async def engine_error_handler(request: Request, exc: EngineError):
        return JSONResponse(
            status_code=400, content={"error": "engine", "detail": str(exc)}
        )

    @app.get(api + "/health")
    def health():
        return {"status": "ok", "sessions": len(sessions)}

    @app.get(api + "/config")
    def get_config():
        return config.to_json_dict()

    @app.post(api + "/session")
    def create_session():
        session = sessions.create()
        return {"session": session.id}

    @app.post(api + "/grammar")
    def load_grammar_ep(body: GrammarBody):
        session = get_session(body.session)
        if body.text is None and body.path is None:
            raise HTTPException(status_code=400, detail="need text or path")
        text = body.text if body.text is not None else _read(body.path)
        grammar = parse_grammar(
            text,
            formalism=body.formalism,
            file=body.path or "<request>",
            start=body.start,
        )
        session.grammar = grammar
        # Without interface rules every preterminal is genuinely undefined.
        preterminals = (
            set(session.lexicon.preterminals()) if session.lexicon else set()
        )
        report = checks_mod.run_checks(grammar, preterminals=preterminals)
        session.check_report = report
        session.last_outcome = None
        return envelope(
            session,
            formalism=grammar.formalism,
            rules=len(grammar.rules),
            findings=report.to_json_dict()["findings"],
        )

    @app.post(api + "/lexicon")
    def load_lexicon_ep(body: LexiconBody):
        session = get_session(body.session)
        if body.text is None and body.path is None:
            raise HTTPException(status_code=400, detail="need text or path")
        text = body.text if body.text is not None else _read(body.path)
        lexicon = parse_lexicon(text, file=body.path or "<request>")
        rules_text = (
            body.rules_text
            if body.rules_text is not None
            else (_read(body.rules_path) if body.rules_path else "")
        )
        formalism = session.grammar.formalism if session.grammar else None
        rules = parse_interface_rules(
            rules_text, formalism=formalism, file=body.rules_path or "<request>"
        )
        session.lexicon = BoundLexicon(lexicon, rules)
        return envelope(
            session,
            entries=len(lexicon),
            rules=len(rules),
            warnings=[str(w) for w in rules.warnings],
        )

    @app.get(api + "/check")
    def check_ep(session: str):
        s = get_session(session)
        grammar = need_grammar(s)
        preterminals = set(s.lexicon.preterminals()) if s.lexicon else set()
        report = checks_mod.run_checks(grammar, preterminals=preterminals)
        return envelope(s, **report.to_json_dict())

    @app.get(api + "/index")
    def index_ep(session: str):
        s = get_session(session)
        grammar = need_grammar(s)
        index = grammar_index(grammar)
        return envelope(
            s, index={sym: e.to_json_dict() for sym, e in index.items()}
        )

    def parse_payload(outcome):
        result = outcome.result
        payload = {
            "sentence": result.sentence,
            "tokens": list(result.tokens),
            "engine": result.engine,
            "readings": [
                {
                    "tree": json.loads(render_tree(r.tree, "json")),
                    "fstructure": render_fs(r.fstructure) if r.fstructure else None,
                    "fstructure_indented": (
                        render_fs(r.fstructure, "indented") if r.fstructure else None
                    ),
                }
                for r in result.readings
            ],
            "warnings": list(result.warnings),
            "aborted": outcome.aborted,
        }
        if outcome.fragments is not None:
            payload["fragments"] = outcome.fragments.to_json_dict()
            payload["paths"] = [p.to_json_dict() for p in outcome.paths or []]
        if outcome.trace:
            payload["trace"] = [e.to_json_dict() for e in outcome.trace]
        return payload

    def run_parse(session, body, control=None, trace_sink=None):
        grammar = need_grammar(session)
        lexicon = need_lexicon(session)
        trace_filter = frozenset(body.trace) if body.trace is not None else None
        outcome = dispatch_parse(
            grammar,
            lexicon,
            body.sentence,
            engine=body.engine or session.engine,
            trace_filter=trace_filter,
            control=control,
            trace_sink=trace_sink,
        )
        session.last_outcome = outcome
        return outcome

    @app.post(api + "/parse")
    def parse_ep(body: ParseBody):
        session = get_session(body.session)
        if not body.stream:
            outcome = run_parse(session, body)
            return envelope(session, **parse_payload(outcome))

        # Streamed parse: trace events arrive as they happen; the running
        # session can be paused, stepped, and aborted via /trace-control.
        events = queue.Queue()
        control = TraceControl(
            filter=frozenset(body.trace) if body.trace is not None else None,
            breakpoints=session.breakpoints,
        )
        session.control = control
        grammar = need_grammar(session)
        lexicon = need_lexicon(session)

        def sink(event):
            events.put(("trace", event.to_json_dict()))

        def work():
            try:
                outcome = dispatch_parse(
                    grammar,
                    lexicon,
                    body.sentence,
                    engine=body.engine or session.engine,
                    control=control,
                    trace_sink=sink,
                )
                session.last_outcome = outcome
                events.put(("result", parse_payload(outcome)))
            except Exception as exc:
                events.put(("error", {"detail": str(exc)}))
            events.put(None)

        thread = threading.Thread(target=work, daemon=True)
        thread.start()

        def stream():
            while True:
                item = events.get()
                if item is None:
                    break
                kind, payload = item
                yield _sse({"type": kind, **payload})

        return StreamingResponse(stream(), media_type="text/event-stream")

    @app.post(api + "/trace-control")
    def trace_control_ep(body: TraceControlBody):
        session = get_session(body.session)
        warnings = []
        known = set()
        if session.grammar is not None:
            known.update(grammar_index(session.grammar).keys())
        if session.lexicon is not None:
            known.update(session.lexicon.preterminals())
        control = session.control

        def vet(names):
            good = set()
            for name in names:
                if known and name not in known:
                    warnings.append(f"unknown category in filter: {name!r}")
                else:
                    good.add(name)
            return good

        if body.filter is not None:
            session.trace_filter = vet(body.filter)
            if control is not None:
                control.set_filter(session.trace_filter)
        if body.breakpoints is not None:
            session.breakpoints = frozenset(vet(body.breakpoints))
            if control is not None:
                control.set_breakpoints(session.breakpoints)
        if body.mode is not None:
            if control is None:
                raise HTTPException(status_code=409, detail="no parse running")
            if body.mode == "abort":
                control.abort()
            elif body.mode == "run":
                control.resume()
            elif body.mode == "step":
                control.step(body.steps)
            else:
                raise HTTPException(status_code=400, detail=f"unknown mode {body.mode!r}")
        return envelope(session, warnings=warnings)

    @app.get(api + "/chart")
    def chart_ep(session: str):
        s = get_session(session)
        if s.last_outcome is None or s.last_outcome.chart is None:
            raise HTTPException(status_code=404, detail="no chart available")
        return envelope(s, **s.last_outcome.chart.to_json_dict())

    @app.get(api + "/fragments")
    def fragments_ep(session: str):
        s = get_session(session)
        outcome = s.last_outcome
        if outcome is None:
            raise HTTPException(status_code=404, detail="nothing parsed yet")
        fragments = outcome.fragments
        paths = outcome.paths
        if fragments is None or paths is None:
            if outcome.chart is not None:
                edges = diagnostics.chart_view(outcome.chart)
            else:
                edges = diagnostics.wfst_view(outcome.wfst)
            if fragments is None:
                fragments = diagnostics.largest_fragments(
                    edges, outcome.result.tokens
                )
            if paths is None:
                paths = diagnostics.shortest_paths(edges, outcome.result.tokens)
        return envelope(
            s, fragments=fragments.to_json_dict()["fragments"],
            coverage=fragments.to_json_dict()["coverage"],
            paths=[p.to_json_dict() for p in paths],
        )

    @app.post(api + "/baseline/save")
    def baseline_save_ep(body: SentenceBody):
        session = get_session(body.session)
        outcome = run_parse(session, ParseBody(
            session=body.session, sentence=body.sentence, engine=body.engine,
            trace=[],
        ))
        path = results_mod.save_result(outcome.result, config.store_dir)
        return envelope(session, saved=path, readings=outcome.result.reading_count)

    @app.post(api + "/baseline/compare")
    def baseline_compare_ep(body: SentenceBody):
        session = get_session(body.session)
        grammar = need_grammar(session)
        try:
            saved = results_mod.load_result(
                body.sentence, config.store_dir, grammar.fingerprint
            )
        except results_mod.BaselineMissing as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        outcome = run_parse(session, ParseBody(
            session=body.session, sentence=body.sentence, engine=body.engine,
            trace=[],
        ))
        comparison = results_mod.compare_results(saved, outcome.result)
        return envelope(
            session,
            **comparison.to_json_dict(),
            baseline_warnings=list(saved.warnings),
        )

    @app.post(api + "/suite/run")
    def suite_run_ep(body: SuiteBody):
        session = get_session(body.session)
        grammar = need_grammar(session)
        lexicon = need_lexicon(session)
        classes = []
        for path in body.paths or []:
            classes.append(testsuite.load_class(path))
        for i, text in enumerate(body.texts or []):
            classes.append(testsuite.parse_class(text, file=f"<request {i}>"))
        if not classes:
            raise HTTPException(status_code=400, detail="need paths or texts")
        if body.tags:
            cases, _ = testsuite.select_cases(classes, set(body.tags))
            keep = {c.sentence for c in cases}
            classes = [
                testsuite.TestClass(c.phenomenon, c.path,
                                    [x for x in c.cases if x.sentence in keep])
                for c in classes
            ]
        run_config = testsuite.RunConfig(
            engine=body.engine
            or ("chart" if grammar.formalism in ("IDLP", "GPSG") else "td"),
            compare_to_baseline=body.compare,
            save_baselines=body.save_baselines,
            store_dir=config.store_dir,
            workers=config.workers or None,
        )
        rows = queue.Queue()

        def work():
            table = testsuite.run_suite(
                classes, grammar, lexicon, run_config,
                progress=lambda row: rows.put(("progress", row.to_json_dict())),
            )
            rows.put(("table", table.to_json_dict()))
            rows.put(None)

        thread = threading.Thread(target=work, daemon=True)
        thread.start()

        def stream():
            while True:
                item = rows.get()
                if item is None:
                    break
                kind, payload = item
                yield _sse({"type": kind, **payload})

        return StreamingResponse(stream(), media_type="text/event-stream")

    if config.ui_dir and os.path.isdir(config.ui_dir):
        app.mount("/", StaticFiles(directory=config.ui_dir, html=True), name="ui")

    return app
