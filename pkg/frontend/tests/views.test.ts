// Interaction tests for the individual views.

import { describe, expect, it, vi } from "vitest";

import { ParsePayload } from "../src/api.js";
import { ChartView } from "../src/views/chart.js";
import { GrammarBrowser } from "../src/views/grammar.js";
import { SuiteView } from "../src/views/suite.js";
import { TraceView } from "../src/views/trace.js";
import { TreeView } from "../src/views/tree.js";
import { fixture } from "./fixtures.js";

function mount(): HTMLElement {
  const root = document.createElement("div");
  document.body.appendChild(root);
  return root;
}

describe("grammar browser", () => {
  it("resolves NP to rule (2) defining and rule (1) referencing", () => {
    const index = fixture("index_rules12.json");
    const browser = new GrammarBrowser(mount());
    browser.render(index, fixture("grammar_load_rules12.json").findings);
    expect(Object.keys(index.index).sort()).toEqual(
      ["AdjP", "Det", "N", "NP", "S", "VP"]
    );
    const link = Array.from(
      browser.root.querySelectorAll(".symbol-link")
    ).find((a) => a.textContent === "NP") as HTMLElement;
    link.click();
    const detail = browser.root.querySelector(".symbol-detail")!;
    const defined = detail.querySelector(".defined-by")!.textContent!;
    expect(defined).toContain("NP[kas=K] -> Det[kas=K, num=N]");
    const referenced = detail.querySelector(".referenced-by")!.textContent!;
    expect(referenced).toContain("S -> NP[X], VP[X] | X = [kas=nom].");
  });

  it("marks undefined symbols with a badge", () => {
    const browser = new GrammarBrowser(mount());
    browser.render(
      fixture("index_rules12.json"),
      fixture("grammar_load_rules12.json").findings
    );
    const badges = browser.root.querySelectorAll(".undefined-badge");
    expect(badges.length).toBeGreaterThan(0);
  });

  it("shows an empty-state hint without a grammar", () => {
    const browser = new GrammarBrowser(mount());
    browser.render({ index: {} }, []);
    expect(browser.root.textContent).toContain("no grammar loaded");
  });
});

describe("tree view", () => {
  const payload = fixture<ParsePayload>("parse_subject_chart.json");

  it("toggles a node's full feature structure on click", () => {
    const view = new TreeView(mount());
    view.render(payload.readings[0]);
    expect(view.root.querySelectorAll(".features").length).toBe(0);
    const np = Array.from(view.root.querySelectorAll(".label")).find(
      (n) => n.textContent === "NP"
    ) as HTMLElement;
    np.click();
    const shown = view.root.querySelectorAll(".features");
    expect(shown.length).toBe(1);
    expect(shown[0].textContent).toBe("[kas=nom]");
    const npAgain = Array.from(view.root.querySelectorAll(".label")).find(
      (n) => n.textContent === "NP"
    ) as HTMLElement;
    npAgain.click();
    expect(view.root.querySelectorAll(".features").length).toBe(0);
  });

  it("collapse hides a subtree, zoom narrows to it", () => {
    const view = new TreeView(mount());
    view.render(payload.readings[0]);
    expect(view.root.textContent).toContain("Hund");
    (view.root.querySelector(".collapse") as HTMLElement).click();
    expect(view.root.textContent).not.toContain("Hund");
    (view.root.querySelector(".collapse") as HTMLElement).click();
    const zooms = view.root.querySelectorAll(".zoom");
    (zooms[1] as HTMLElement).click(); // first child constituent (NP)
    expect(view.zoomPath).toEqual([0]);
    expect(view.root.textContent).toContain("zoom out");
    expect(view.root.textContent).not.toContain("schläft");
    (view.root.querySelector(".zoom-out") as HTMLElement).click();
    expect(view.root.textContent).toContain("schläft");
  });
});

describe("chart view", () => {
  it("filters edges by label and span", () => {
    const payload = fixture("chart_subject.json");
    const view = new ChartView(mount());
    view.render(payload);
    const total = view.visibleEdges().length;
    expect(total).toBe(payload.edges.length);
    view.setFilters("NP", "");
    const npOnly = view.visibleEdges();
    expect(npOnly.length).toBeGreaterThan(0);
    expect(npOnly.every((e: any) => e.label === "NP")).toBe(true);
    view.setFilters("", "0-2");
    expect(view.visibleEdges().every((e: any) => e.from === 0 && e.to === 2)).toBe(
      true
    );
    view.setFilters("", "");
    expect(view.visibleEdges().length).toBe(total);
  });
});

describe("suite view", () => {
  it("fills incrementally and reports totals", () => {
    const view = new SuiteView(mount());
    view.start();
    const events = fixture("suite_stream.json");
    const rows = events.filter((e: any) => e.type === "progress");
    view.addRow(rows[0]);
    expect(view.rowCount).toBe(1);
    view.addRow(rows[1]);
    expect(view.rowCount).toBe(2);
    const table = events[events.length - 1];
    view.finish(table);
    expect(view.rowCount).toBe(table.rows.length);
  });
});

describe("trace view", () => {
  it("binds step, run, abort and breakpoints to the controls", () => {
    const calls: string[] = [];
    const view = new TraceView(mount(), {
      step: () => calls.push("step"),
      run: () => calls.push("run"),
      abort: () => calls.push("abort"),
      setBreakpoints: (categories) => calls.push("bp:" + categories.join("/")),
    });
    (view.root.querySelector(".trace-step") as HTMLElement).click();
    (view.root.querySelector(".trace-run") as HTMLElement).click();
    (view.root.querySelector(".trace-abort") as HTMLElement).click();
    const box = view.root.querySelector(".breakpoint-box") as HTMLInputElement;
    box.value = "NP, VP";
    box.dispatchEvent(new Event("change"));
    expect(calls).toEqual(["step", "run", "abort", "bp:NP/VP"]);
  });

  it("indents events by depth and tags ports", () => {
    const view = new TraceView(mount());
    view.addEvent({
      seq: 0, port: "ENTRY", category: "NP", features: "[]",
      depth: 2, position: 0, goal: 1,
    });
    const line = view.log.firstElementChild as HTMLElement;
    expect(line.className).toContain("port-entry");
    expect(line.textContent).toContain("ENTRY NP[] @ 0");
  });
});
