// Single-page workbench: load grammar -> see check findings -> parse ->
// inspect trees / chart / trace -> run suites -> compare against baselines.
// Talks only the documented /api/v1 JSON protocol; one session per tab.

import { ApiClient, Finding, ParsePayload, ServiceError, StreamEvent } from "./api.js";
import { button, clear, el } from "./dom.js";
import { ChartView } from "./views/chart.js";
import { FailureView, renderComparison } from "./views/failure.js";
import { GrammarBrowser } from "./views/grammar.js";
import { SuiteView } from "./views/suite.js";
import { TraceView } from "./views/trace.js";
import { ReadingGallery } from "./views/tree.js";

const TABS = ["readings", "chart", "trace", "suite", "grammar", "baseline"] as const;
type Tab = (typeof TABS)[number];

export class App {
  api: ApiClient;
  root: HTMLElement;
  banner!: HTMLElement;
  findingsBox!: HTMLElement;
  panes: Record<Tab, HTMLElement> = {} as Record<Tab, HTMLElement>;
  gallery!: ReadingGallery;
  chartView!: ChartView;
  traceView!: TraceView;
  suiteView!: SuiteView;
  browser!: GrammarBrowser;
  failureView!: FailureView;
  statusLine!: HTMLElement;
  lastParse: ParsePayload | null = null;

  constructor(root: HTMLElement, api: ApiClient) {
    this.root = root;
    this.api = api;
    this.build();
  }

  private build(): void {
    clear(this.root);
    this.banner = el("div", "banner hidden");
    this.root.appendChild(this.banner);

    const loader = el("div", "loader-panel");
    loader.appendChild(el("h3", "", "grammar & lexicon"));
    const grammarPath = el("input", "grammar-path") as HTMLInputElement;
    grammarPath.placeholder = "grammar file path on the service host";
    const lexiconPath = el("input", "lexicon-path") as HTMLInputElement;
    lexiconPath.placeholder = "lexicon file path";
    const rulesPath = el("input", "rules-path") as HTMLInputElement;
    rulesPath.placeholder = "interface rules file path";
    loader.appendChild(grammarPath);
    loader.appendChild(lexiconPath);
    loader.appendChild(rulesPath);
    loader.appendChild(
      button("load", "load-button", () => {
        void this.loadAll(grammarPath.value, lexiconPath.value, rulesPath.value);
      })
    );
    this.findingsBox = el("div", "findings-box");
    loader.appendChild(this.findingsBox);
    this.root.appendChild(loader);

    const parseBar = el("div", "parse-bar");
    const sentenceBox = el("input", "sentence-box") as HTMLInputElement;
    sentenceBox.placeholder = "sentence to parse";
    const engineSelect = el("select", "engine-select") as HTMLSelectElement;
    for (const engine of ["default", "chart", "td"]) {
      const option = el("option", "", engine) as HTMLOptionElement;
      option.value = engine;
      engineSelect.appendChild(option);
    }
    parseBar.appendChild(sentenceBox);
    parseBar.appendChild(engineSelect);
    parseBar.appendChild(
      button("parse", "parse-button", () => {
        void this.parse(sentenceBox.value, engineSelect.value);
      })
    );
    parseBar.appendChild(
      button("parse + trace", "parse-trace-button", () => {
        void this.parseStreaming(sentenceBox.value, engineSelect.value);
      })
    );
    this.statusLine = el("span", "status-line");
    parseBar.appendChild(this.statusLine);
    this.root.appendChild(parseBar);

    const tabBar = el("div", "tab-bar");
    const paneHost = el("div", "pane-host");
    for (const tab of TABS) {
      tabBar.appendChild(button(tab, `tab tab-${tab}`, () => this.show(tab)));
      const pane = el("div", `pane pane-${tab} hidden`);
      this.panes[tab] = pane;
      paneHost.appendChild(pane);
    }
    this.root.appendChild(tabBar);
    this.root.appendChild(paneHost);

    this.gallery = new ReadingGallery(this.panes.readings);
    this.failureView = new FailureView(el("div"));
    this.panes.readings.appendChild(this.failureView.root);
    this.chartView = new ChartView(this.panes.chart);
    this.traceView = new TraceView(this.panes.trace, {
      step: () => void this.api.traceControl({ mode: "step" }),
      run: () => void this.api.traceControl({ mode: "run" }),
      abort: () => void this.api.traceControl({ mode: "abort" }),
      setBreakpoints: (categories) =>
        void this.api.traceControl({ breakpoints: categories }),
    });
    this.suiteView = new SuiteView(this.panes.suite);
    this.browser = new GrammarBrowser(this.panes.grammar);
    this.browser.redraw();

    const suiteBar = el("div", "suite-bar");
    const suitePaths = el("input", "suite-paths") as HTMLInputElement;
    suitePaths.placeholder = "suite file paths, comma separated";
    suiteBar.appendChild(suitePaths);
    suiteBar.appendChild(
      button("run suite", "suite-run-button", () => {
        const paths = suitePaths.value
          .split(",")
          .map((p) => p.trim())
          .filter((p) => p.length > 0);
        void this.runSuite(paths);
      })
    );
    this.panes.suite.insertBefore(suiteBar, this.panes.suite.firstChild);

    const baselineBar = el("div", "baseline-bar");
    const baselineOut = el("div", "baseline-out");
    baselineBar.appendChild(
      button("save baseline", "baseline-save-button", () => {
        void this.api
          .baselineSave(sentenceBox.value)
          .then((payload) => {
            baselineOut.textContent = `saved ${payload.readings} reading(s)`;
          })
          .catch((error) => this.showError(error));
      })
    );
    baselineBar.appendChild(
      button("compare to baseline", "baseline-compare-button", () => {
        void this.api
          .baselineCompare(sentenceBox.value)
          .then((payload) => renderComparison(baselineOut, payload))
          .catch((error) => this.showError(error));
      })
    );
    this.panes.baseline.appendChild(baselineBar);
    this.panes.baseline.appendChild(baselineOut);

    this.show("readings");
  }

  show(tab: Tab): void {
    for (const name of TABS) {
      this.panes[name].classList.toggle("hidden", name !== tab);
    }
  }

  showError(error: unknown): void {
    this.banner.classList.remove("hidden");
    clear(this.banner);
    const message =
      error instanceof ServiceError
        ? `service error ${error.status}: ${JSON.stringify(error.body)}`
        : `service unreachable: ${String(error)}`;
    this.banner.appendChild(el("span", "", message));
    this.banner.appendChild(
      button("retry", "retry-button", () => {
        this.banner.classList.add("hidden");
        void this.api.health().catch((e) => this.showError(e));
      })
    );
  }

  renderFindings(findings: Finding[]): void {
    clear(this.findingsBox);
    if (findings.length === 0) {
      this.findingsBox.appendChild(el("p", "ok", "no findings"));
      return;
    }
    for (const finding of findings) {
      this.findingsBox.appendChild(
        el("p", `finding ${finding.severity}`, `${finding.severity}: ${finding.message}`)
      );
    }
  }

  async loadAll(grammar: string, lexicon: string, rules: string): Promise<void> {
    try {
      if (this.api.session === null) {
        await this.api.openSession();
      }
      const loaded = await this.api.loadGrammar({ path: grammar });
      if (lexicon) {
        await this.api.loadLexicon({ path: lexicon, rules_path: rules });
      }
      // The index may be stale after a reload; always refetch, and take the
      // findings from a post-lexicon check (interface rules define the
      // preterminals, so undefined-symbol findings from the bare grammar
      // load may no longer apply).
      const [index, check] = await Promise.all([this.api.index(), this.api.check()]);
      this.renderFindings(check.findings);
      this.browser.render(index, check.findings);
      this.statusLine.textContent =
        `${loaded.formalism}, ${loaded.rules} rule(s), ${loaded.fingerprint}`;
    } catch (error) {
      this.showError(error);
    }
  }

  applyParse(payload: ParsePayload): void {
    this.lastParse = payload;
    this.gallery.render(payload.readings);
    if (payload.fragments) {
      this.failureView.render(payload.fragments, payload.tokens, payload.paths ?? []);
      this.panes.readings.appendChild(this.failureView.root);
    } else {
      this.failureView.root.remove();
    }
    this.statusLine.textContent =
      `${payload.readings.length} reading(s)` + (payload.aborted ? " (aborted)" : "");
  }

  async parse(sentence: string, engine: string): Promise<void> {
    try {
      const payload = await this.api.parse(
        sentence,
        engine === "default" ? undefined : engine
      );
      this.applyParse(payload);
      if (payload.engine === "chart") {
        const chart = await this.api.chart();
        this.chartView.render(chart);
      }
      this.show("readings");
    } catch (error) {
      this.showError(error);
    }
  }

  async parseStreaming(sentence: string, engine: string): Promise<void> {
    this.traceView.clearLog();
    this.show("trace");
    try {
      await this.api.parseStream(
        sentence,
        null,
        (event: StreamEvent) => {
          if (event.type === "trace") {
            this.traceView.addEvent(event);
          } else if (event.type === "result") {
            this.applyParse(event);
          } else if (event.type === "error") {
            this.showError(new Error(event.detail));
          }
        },
        engine === "default" ? undefined : engine
      );
    } catch (error) {
      this.showError(error);
    }
  }

  async runSuite(paths: string[]): Promise<void> {
    this.suiteView.start();
    this.show("suite");
    try {
      await this.api.suiteRun(paths.length ? paths : null, null, (event) => {
        if (event.type === "progress") {
          this.suiteView.addRow(event);
        } else if (event.type === "table") {
          this.suiteView.finish(event);
        }
      });
    } catch (error) {
      this.showError(error);
    }
  }
}

export function mount(root: HTMLElement, base = ""): App {
  return new App(root, new ApiClient(base));
}

declare global {
  interface Window {
    grambenchApp?: App;
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  window.grambenchApp = mount(document.getElementById("app")!);
}
