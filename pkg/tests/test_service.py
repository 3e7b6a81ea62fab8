import io
import json
import time

import pytest
from fastapi.testclient import TestClient

from grambench.service import create_app
from grambench.workbench import Config


@pytest.fixture()
def client(tmp_path):
    config = Config(store_dir=str(tmp_path / "store"))
    app = create_app(config)
    with TestClient(app) as c:
        yield c


@pytest.fixture()
def session(client, demo_paths):
    sid = client.post("/api/v1/session").json()["session"]
    r = client.post(
        "/api/v1/grammar", json={"session": sid, "path": demo_paths["idlp"]}
    )
    assert r.status_code == 200
    r = client.post(
        "/api/v1/lexicon",
        json={
            "session": sid,
            "path": demo_paths["lex"],
            "rules_path": demo_paths["ifr"],
        },
    )
    assert r.status_code == 200
    return sid


def sse_events(response):
    events = []
    for line in response.iter_lines():
        if line.startswith("data: "):
            events.append(json.loads(line[len("data: "):]))
    return events


def test_health(client):
    r = client.get("/api/v1/health")
    assert r.status_code == 200
    assert r.json()["status"] == "ok"


def test_load_grammar_reports_findings(client, demo_paths):
    sid = client.post("/api/v1/session").json()["session"]
    text = "S -> NP[X], VP[X] | X = [kas=nom]."
    r = client.post(
        "/api/v1/grammar", json={"session": sid, "text": text, "formalism": "IDLP"}
    )
    assert r.status_code == 200
    payload = r.json()
    assert payload["fingerprint"]
    undefined = [
        f["witness"][0]
        for f in payload["findings"]
        if f["kind"] == "undefined_symbol"
    ]
    assert undefined == ["NP", "VP"]  # nothing defines the preterminals yet
    r = client.post(
        "/api/v1/lexicon",
        json={"session": sid, "path": demo_paths["lex"],
              "rules_path": demo_paths["ifr"]},
    )
    assert r.status_code == 200
    r = client.get("/api/v1/check", params={"session": sid})
    undefined = [
        f["witness"][0]
        for f in r.json()["findings"]
        if f["kind"] == "undefined_symbol"
    ]
    assert undefined == ["NP", "VP"]


def test_load_error_returns_422_diagnostics(client):
    sid = client.post("/api/v1/session").json()["session"]
    r = client.post("/api/v1/grammar", json={"session": sid, "text": "np -> x."})
    assert r.status_code == 422
    body = r.json()
    assert body["error"] == "load_failed"
    assert body["diagnostics"]


def test_session_not_found(client):
    r = client.post("/api/v1/grammar", json={"session": "nope", "text": "S -> 'x'."})
    assert r.status_code == 404


def test_parse_and_chart(client, session):
    r = client.post(
        "/api/v1/parse", json={"session": session, "sentence": "der Hund schläft"}
    )
    assert r.status_code == 200
    payload = r.json()
    assert payload["session"] == session
    assert payload["fingerprint"]
    assert len(payload["readings"]) == 1
    tree = payload["readings"][0]["tree"]
    assert tree["label"] == "S"
    np = tree["children"][0]
    assert np["features"] == "[kas=nom]"

    r = client.get("/api/v1/chart", params={"session": session})
    assert r.status_code == 200
    edges = r.json()["edges"]
    assert edges
    ids = [e["id"] for e in edges]
    assert ids == sorted(ids)


def test_parse_failure_carries_fragments(client, session):
    r = client.post(
        "/api/v1/parse", json={"session": session, "sentence": "Hund der schläft"}
    )
    payload = r.json()
    assert payload["readings"] == []
    assert payload["fragments"]["fragments"]
    r = client.get("/api/v1/fragments", params={"session": session})
    assert r.status_code == 200
    assert r.json()["fragments"]


def test_index_endpoint_matches_example(client, session):
    r = client.get("/api/v1/index", params={"session": session})
    index = r.json()["index"]
    assert len(index["NP"]["defined_by"]) == 2
    assert index["NP"]["referenced_by"]


def test_trace_control_unknown_category_warns(client, session):
    r = client.post(
        "/api/v1/trace-control",
        json={"session": session, "filter": ["NP", "Bogus"]},
    )
    assert r.status_code == 200
    warnings = r.json()["warnings"]
    assert any("Bogus" in w for w in warnings)


def test_streamed_parse_emits_trace_then_result(client, demo_paths):
    sid = client.post("/api/v1/session").json()["session"]
    client.post("/api/v1/grammar", json={"session": sid, "path": demo_paths["dcg"]})
    client.post(
        "/api/v1/lexicon",
        json={"session": sid, "path": demo_paths["lex"],
              "rules_path": demo_paths["ifr"]},
    )
    with client.stream(
        "POST",
        "/api/v1/parse",
        json={"session": sid, "sentence": "der Hund schläft",
              "trace": ["NP", "VP"], "stream": True},
    ) as r:
        events = sse_events(r)
    kinds = [e["type"] for e in events]
    assert kinds[-1] == "result"
    assert "trace" in kinds
    trace_cats = {e["category"] for e in events if e["type"] == "trace"}
    assert trace_cats <= {"NP", "VP"}
    final = events[-1]
    assert len(final["readings"]) == 1


def test_suite_run_streams_progress_then_table(client, session, demo_paths):
    with client.stream(
        "POST",
        "/api/v1/suite/run",
        json={"session": session, "paths": demo_paths["suites"]},
    ) as r:
        events = sse_events(r)
    assert events[0]["type"] == "progress"
    assert events[-1]["type"] == "table"
    assert len([e for e in events if e["type"] == "progress"]) == 40
    assert events[-1]["totals"] == {"pass": 40, "fail": 0, "error": 0}


def test_baseline_save_and_compare_roundtrip(client, session):
    r = client.post(
        "/api/v1/baseline/save",
        json={"session": session, "sentence": "der Hund schläft"},
    )
    assert r.status_code == 200
    r = client.post(
        "/api/v1/baseline/compare",
        json={"session": session, "sentence": "der Hund schläft"},
    )
    assert r.status_code == 200
    payload = r.json()
    assert payload["verdict"] == "equal"
    r = client.post(
        "/api/v1/baseline/compare",
        json={"session": session, "sentence": "die Katze schläft"},
    )
    assert r.status_code == 404


def test_cli_and_service_parse_agree(client, session, demo_paths):
    from grambench.cli import main as cli_main

    out, err = io.StringIO(), io.StringIO()
    code = cli_main(
        ["parse", demo_paths["idlp"], demo_paths["lex"], demo_paths["ifr"],
         "die Katze jagt den Hund in dem Garten", "--format", "json"],
        out=out, err=err,
    )
    assert code == 0
    cli_payload = json.loads(out.getvalue())
    r = client.post(
        "/api/v1/parse",
        json={"session": session, "sentence": "die Katze jagt den Hund in dem Garten"},
    )
    service_payload = r.json()
    cli_trees = [rd["tree"] for rd in cli_payload["readings"]]
    service_trees = [rd["tree"] for rd in service_payload["readings"]]
    assert cli_trees == service_trees


def test_abort_streamed_parse(client, demo_paths):
    sid = client.post("/api/v1/session").json()["session"]
    client.post("/api/v1/grammar", json={"session": sid, "path": demo_paths["dcg"]})
    client.post(
        "/api/v1/lexicon",
        json={"session": sid, "path": demo_paths["lex"],
              "rules_path": demo_paths["ifr"]},
    )
    client.post(
        "/api/v1/trace-control", json={"session": sid, "breakpoints": ["VP"]}
    )
    import threading

    def abort_soon():
        time.sleep(0.2)
        client.post("/api/v1/trace-control", json={"session": sid, "mode": "abort"})

    killer = threading.Thread(target=abort_soon)
    killer.start()
    with client.stream(
        "POST",
        "/api/v1/parse",
        json={"session": sid, "sentence": "der Hund schläft", "trace": [],
              "stream": True},
    ) as r:
        events = sse_events(r)
    killer.join()
    final = events[-1]
    assert final["type"] == "result"
    assert final["aborted"] is True


def test_failed_parse_payload_includes_both_diagnostics(client, session):
    r = client.post(
        "/api/v1/parse", json={"session": session, "sentence": "Hund der schläft"}
    )
    payload = r.json()
    assert payload["fragments"]["fragments"]
    assert payload["paths"]
    labels = [e["label"] for e in payload["paths"][0]["edges"]]
    assert len(labels) >= 1


def test_stateless_across_restarts_except_store(tmp_path, demo_paths):
    store = str(tmp_path / "store")
    first = TestClient(create_app(Config(store_dir=store)))
    sid = first.post("/api/v1/session").json()["session"]
    first.post("/api/v1/grammar", json={"session": sid, "path": demo_paths["idlp"]})
    first.post(
        "/api/v1/lexicon",
        json={"session": sid, "path": demo_paths["lex"],
              "rules_path": demo_paths["ifr"]},
    )
    r = first.post("/api/v1/baseline/save",
                   json={"session": sid, "sentence": "der Hund schläft"})
    assert r.status_code == 200

    # A fresh service instance: sessions are gone, the store survives.
    second = TestClient(create_app(Config(store_dir=store)))
    r = second.get("/api/v1/check", params={"session": sid})
    assert r.status_code == 404
    sid2 = second.post("/api/v1/session").json()["session"]
    second.post("/api/v1/grammar", json={"session": sid2, "path": demo_paths["idlp"]})
    second.post(
        "/api/v1/lexicon",
        json={"session": sid2, "path": demo_paths["lex"],
              "rules_path": demo_paths["ifr"]},
    )
    r = second.post("/api/v1/baseline/compare",
                    json={"session": sid2, "sentence": "der Hund schläft"})
    assert r.status_code == 200
    assert r.json()["verdict"] == "equal"


def test_session_expiry(tmp_path):
    config = Config(store_dir=str(tmp_path), session_idle=0.01)
    app = create_app(config)
    with TestClient(app) as client:
        sid = client.post("/api/v1/session").json()["session"]
        time.sleep(0.05)
        r = client.get("/api/v1/check", params={"session": sid})
        assert r.status_code == 404
