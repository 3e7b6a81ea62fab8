// Failure view: the largest recognized fragments lead; the chart inspector
// stays one click away.  Also renders baseline comparison outcomes.

import { ComparePayload, FragmentReport, FragmentSpan } from "../api.js";
import { clear, el } from "../dom.js";

export interface ChartPathPayload {
  edges: FragmentSpan[];
}

export class FailureView {
  root: HTMLElement;

  constructor(root: HTMLElement) {
    this.root = root;
    this.root.classList.add("failure-view");
  }

  render(
    report: FragmentReport,
    tokens: string[],
    paths: ChartPathPayload[] = []
  ): void {
    clear(this.root);
    this.root.appendChild(el("h4", "", "no complete reading — recognized fragments"));
    const list = el("ul", "fragment-list");
    for (const fragment of report.fragments) {
      const words = tokens.slice(fragment.from, fragment.to).join(" ");
      const item = el(
        "li",
        fragment.is_word ? "fragment word-fragment" : "fragment",
        `[${fragment.from}–${fragment.to}] ${fragment.label}  “${words}”`
      );
      list.appendChild(item);
    }
    this.root.appendChild(list);
    this.root.appendChild(
      el("p", "coverage", `constituent coverage: ${(report.coverage * 100).toFixed(0)}%`)
    );
    if (paths.length) {
      this.root.appendChild(el("h5", "", "shortest chart paths"));
      const pathList = el("ul", "path-list");
      for (const path of paths) {
        pathList.appendChild(
          el("li", "chart-path", path.edges.map((e) => e.label).join(" . "))
        );
      }
      this.root.appendChild(pathList);
    }
  }
}

export function renderComparison(root: HTMLElement, payload: ComparePayload): void {
  clear(root);
  root.classList.add("comparison-view");
  root.appendChild(
    el(
      "p",
      `verdict verdict-${payload.verdict}`,
      `${payload.verdict}: saved ${payload.old_count}, new ${payload.new_count} (${payload.summary})`
    )
  );
  for (const warning of payload.baseline_warnings ?? []) {
    root.appendChild(el("p", "warning", warning));
  }
  payload.reports.forEach((report, index) => {
    const where =
      report.path === null || report.path.length === 0
        ? "root"
        : report.path.join("/");
    const detail = Object.entries(report.detail)
      .map(([key, value]) => `${key}=${String(value)}`)
      .join(", ");
    root.appendChild(
      el(
        "div",
        `pair-report verdict-${report.verdict}`,
        `reading ${index}: ${report.verdict}` +
          (report.verdict === "equal" ? "" : ` at ${where} (${detail})`)
      )
    );
  });
}
