// Grammar browser: a clickable index of all rule heads.  Selecting a
// symbol reveals its defining rules and the rules that reference it, with
// source locations; symbols without a definition carry an "undefined"
// badge fed by the check findings.

import { Finding, IndexPayload } from "../api.js";
import { clear, el } from "../dom.js";

export class GrammarBrowser {
  root: HTMLElement;
  payload: IndexPayload | null = null;
  undefinedSymbols = new Set<string>();
  selected: string | null = null;

  constructor(root: HTMLElement) {
    this.root = root;
    this.root.classList.add("grammar-browser");
  }

  render(payload: IndexPayload, findings: Finding[] = []): void {
    this.payload = payload;
    this.undefinedSymbols = new Set(
      findings
        .filter((f) => f.kind === "undefined_symbol")
        .map((f) => f.witness[0])
    );
    this.selected = null;
    this.redraw();
  }

  select(symbol: string): void {
    this.selected = symbol;
    this.redraw();
  }

  redraw(): void {
    clear(this.root);
    if (this.payload === null || Object.keys(this.payload.index).length === 0) {
      this.root.appendChild(
        el("p", "empty-hint", "no grammar loaded yet — load one to browse its rules")
      );
      return;
    }
    const list = el("ul", "symbol-list");
    for (const symbol of Object.keys(this.payload.index).sort()) {
      const item = el("li", "symbol-item");
      const link = el("a", "symbol-link", symbol);
      link.addEventListener("click", () => this.select(symbol));
      item.appendChild(link);
      if (this.undefinedSymbols.has(symbol)) {
        item.appendChild(el("span", "badge undefined-badge", "undefined"));
      }
      if (symbol === this.selected) {
        item.classList.add("selected");
      }
      list.appendChild(item);
    }
    this.root.appendChild(list);

    if (this.selected !== null) {
      const entry = this.payload.index[this.selected];
      const detail = el("div", "symbol-detail");
      detail.appendChild(el("h4", "", this.selected));
      const defs = el("div", "defined-by");
      defs.appendChild(
        el("h5", "", entry.defined_by.length ? "defined by" : "no defining rules")
      );
      for (const rule of entry.defined_by) {
        const row = el("div", "rule-row");
        row.appendChild(el("code", "", rule.rule));
        row.appendChild(el("span", "loc", ` ${rule.file}:${rule.line}`));
        defs.appendChild(row);
      }
      detail.appendChild(defs);
      const refs = el("div", "referenced-by");
      refs.appendChild(el("h5", "", "referenced by"));
      if (entry.referenced_by.length === 0) {
        refs.appendChild(el("p", "empty-hint", "nothing references this symbol"));
      }
      for (const rule of entry.referenced_by) {
        const row = el("div", "rule-row");
        row.appendChild(el("code", "", rule.rule));
        row.appendChild(el("span", "loc", ` ${rule.file}:${rule.line}`));
        refs.appendChild(row);
      }
      detail.appendChild(refs);
      this.root.appendChild(detail);
    }
  }
}
