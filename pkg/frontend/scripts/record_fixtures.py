"""Record real service payloads for the UI replay tests.

Runs the workbench service in-process and captures one JSON fixture per
scenario the backend acceptance suite exercises.  The UI tests replay these
verbatim; regenerate with:

    python frontend/scripts/record_fixtures.py
"""

import json
import os
import sys
import tempfile

from fastapi.testclient import TestClient

from grambench.data import path as demo_path, suite_paths
from grambench.service import create_app
from grambench.workbench import Config

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), "..", "fixtures")

RULES_12 = (
    "S          -> NP[X],  \n"
    "                  VP[X] | X = [kas=nom].\n"
    "NP[kas=K]  -> Det[kas=K, num=N], \n"
    "                  (AdjP[kas=K, num=N]), \n"
    "                  N[kas=K, num=N].\n"
)

EXTRA_READING_RULE = "S -> NP[kas=nom], VP[].\n"


def sse_events(response):
    events = []
    for line in response.iter_lines():
        if line.startswith("data: "):
            events.append(json.loads(line[len("data: "):]))
    return events


def write(name, payload):
    target = os.path.join(FIXTURE_DIR, name)
    with open(target, "w", encoding="utf-8") as f:
        json.dump(payload, f, ensure_ascii=False, indent=2, sort_keys=True)
    print(f"wrote {name}")


def main():
    os.makedirs(FIXTURE_DIR, exist_ok=True)
    store = tempfile.mkdtemp(prefix="grambench-fixtures-")
    client = TestClient(create_app(Config(store_dir=store)))

    def new_session():
        return client.post("/api/v1/session").json()["session"]

    def load(sid, grammar_path=None, grammar_text=None, formalism=None,
             lexicon=True):
        body = {"session": sid}
        if grammar_path:
            body["path"] = grammar_path
        if grammar_text:
            body["text"] = grammar_text
        if formalism:
            body["formalism"] = formalism
        r = client.post("/api/v1/grammar", json=body)
        assert r.status_code == 200, r.text
        out = r.json()
        if lexicon:
            r = client.post(
                "/api/v1/lexicon",
                json={"session": sid, "path": demo_path("demo.lex"),
                      "rules_path": demo_path("demo.ifr")},
            )
            assert r.status_code == 200, r.text
        return out

    # Scenario: rules (1)+(2) load with check findings; their symbol index.
    sid = new_session()
    grammar_load = load(sid, grammar_text=RULES_12, formalism="IDLP",
                        lexicon=False)
    write("grammar_load_rules12.json", grammar_load)
    write("index_rules12.json",
          client.get("/api/v1/index", params={"session": sid}).json())

    # Scenario: a grammar with left-recursion findings.
    sid = new_session()
    leftrec = load(sid, grammar_text="S -> S, NP.\nNP -> 'x'.\n",
                   lexicon=False)
    write("grammar_load_leftrec.json", leftrec)

    # Scenario: the demo workbench session everything else runs in.
    sid = new_session()
    demo_load = load(sid, grammar_path=demo_path("demo.idlp"))
    write("grammar_load_demo.json", demo_load)
    write("check_demo.json",
          client.get("/api/v1/check", params={"session": sid}).json())
    write("index_demo.json",
          client.get("/api/v1/index", params={"session": sid}).json())

    # Scenario: one reading with kas=nom on the NP (chart engine).
    r = client.post("/api/v1/parse",
                    json={"session": sid, "sentence": "der Hund schläft"})
    write("parse_subject_chart.json", r.json())
    write("chart_subject.json",
          client.get("/api/v1/chart", params={"session": sid}).json())

    # Scenario: ambiguous attachment, two readings side by side.
    r = client.post(
        "/api/v1/parse",
        json={"session": sid,
              "sentence": "die Katze jagt den Hund in dem Garten"},
    )
    write("parse_ambiguous.json", r.json())

    # Scenario: failed parse with fragments.
    r = client.post("/api/v1/parse",
                    json={"session": sid, "sentence": "Hund der schläft"})
    write("parse_failed.json", r.json())
    write("fragments_failed.json",
          client.get("/api/v1/fragments", params={"session": sid}).json())

    # Scenario: baseline round trip (equal) and an additional reading.
    r = client.post("/api/v1/baseline/save",
                    json={"session": sid, "sentence": "der Hund schläft"})
    assert r.status_code == 200, r.text
    r = client.post("/api/v1/baseline/compare",
                    json={"session": sid, "sentence": "der Hund schläft"})
    write("compare_equal.json", r.json())
    with open(demo_path("demo.idlp"), encoding="utf-8") as f:
        widened = f.read() + EXTRA_READING_RULE
    sid2 = new_session()
    load(sid2, grammar_text=widened)
    r = client.post("/api/v1/baseline/compare",
                    json={"session": sid2, "sentence": "der Hund schläft"})
    write("compare_additional_reading.json", r.json())

    # Scenario: the subject sentence on the top-down engine, plus a traced
    # streamed parse with step-relevant events.
    sid3 = new_session()
    load(sid3, grammar_path=demo_path("demo.dcg"))
    r = client.post("/api/v1/parse",
                    json={"session": sid3, "sentence": "der Hund schläft"})
    write("parse_subject_td.json", r.json())
    with client.stream(
        "POST", "/api/v1/parse",
        json={"session": sid3, "sentence": "der Hund schläft",
              "trace": ["NP", "VP"], "stream": True},
    ) as r:
        write("trace_stream.json", sse_events(r))

    # Scenario: an annotated-rule parse with a functional structure.
    sid4 = new_session()
    load(sid4, grammar_path=demo_path("demo.lfg"))
    r = client.post("/api/v1/parse",
                    json={"session": sid4, "sentence": "die Katze jagt den Hund"})
    write("parse_fstructure.json", r.json())

    # Scenario: the full demo suite sweep with progress events.
    with client.stream(
        "POST", "/api/v1/suite/run",
        json={"session": sid, "paths": suite_paths()},
    ) as r:
        write("suite_stream.json", sse_events(r))

    print("done")


if __name__ == "__main__":
    sys.exit(main())
