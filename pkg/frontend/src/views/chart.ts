// Chart inspector: a filterable table of edges.  Shown on demand — the
// failure view leads with fragments so hundreds of edges never swamp the
// screen uninvited.

import { ChartPayload } from "../api.js";
import { clear, el } from "../dom.js";

export class ChartView {
  root: HTMLElement;
  payload: ChartPayload | null = null;
  labelFilter = "";
  spanFilter = "";

  constructor(root: HTMLElement) {
    this.root = root;
    this.root.classList.add("chart-view");
  }

  render(payload: ChartPayload): void {
    this.payload = payload;
    this.redraw();
  }

  setFilters(label: string, span: string): void {
    this.labelFilter = label.trim();
    this.spanFilter = span.trim();
    this.redraw();
  }

  visibleEdges() {
    if (this.payload === null) {
      return [];
    }
    let edges = this.payload.edges;
    if (this.labelFilter) {
      edges = edges.filter((e) => e.label === this.labelFilter);
    }
    if (this.spanFilter) {
      const parts = this.spanFilter.split("-").map((p) => parseInt(p, 10));
      if (parts.length === 2 && parts.every((p) => !Number.isNaN(p))) {
        edges = edges.filter((e) => e.from === parts[0] && e.to === parts[1]);
      }
    }
    return edges;
  }

  redraw(): void {
    clear(this.root);
    if (this.payload === null) {
      this.root.appendChild(el("p", "empty-hint", "no chart yet — parse something first"));
      return;
    }
    const controls = el("div", "chart-controls");
    const labelBox = el("input", "label-filter") as HTMLInputElement;
    labelBox.placeholder = "label, e.g. NP";
    labelBox.value = this.labelFilter;
    const spanBox = el("input", "span-filter") as HTMLInputElement;
    spanBox.placeholder = "span, e.g. 0-2";
    spanBox.value = this.spanFilter;
    const apply = () => this.setFilters(labelBox.value, spanBox.value);
    labelBox.addEventListener("change", apply);
    spanBox.addEventListener("change", apply);
    controls.appendChild(labelBox);
    controls.appendChild(spanBox);
    controls.appendChild(
      el("span", "token-strip", this.payload.tokens.join(" "))
    );
    this.root.appendChild(controls);

    const table = el("table", "edge-table");
    const head = el("tr");
    for (const column of ["id", "span", "label", "state", "features", "children"]) {
      head.appendChild(el("th", "", column));
    }
    table.appendChild(head);
    for (const edge of this.visibleEdges()) {
      const row = el("tr", `edge-${edge.state}`);
      row.appendChild(el("td", "", String(edge.id)));
      row.appendChild(el("td", "", `${edge.from}–${edge.to}`));
      row.appendChild(el("td", "", edge.label));
      row.appendChild(el("td", "", edge.state));
      row.appendChild(el("td", "features-cell", edge.features));
      row.appendChild(el("td", "", edge.children.join(",")));
      table.appendChild(row);
    }
    this.root.appendChild(table);
  }
}
