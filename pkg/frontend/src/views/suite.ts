// Live suite results grid: rows fill in as progress events arrive over the
// server-push channel; the final table event fixes totals and order.

import { SuiteRow, SuiteTable } from "../api.js";
import { clear, el } from "../dom.js";

const COLUMNS = ["phenomenon", "sentence", "expected", "readings", "status", "verdict"];

function expectation(row: SuiteRow): string {
  if (!row.good) {
    return "bad";
  }
  return row.expected_readings === null ? ">=1" : String(row.expected_readings);
}

export class SuiteView {
  root: HTMLElement;
  table: HTMLTableElement | null = null;
  statusLine: HTMLElement | null = null;
  rowCount = 0;

  constructor(root: HTMLElement) {
    this.root = root;
    this.root.classList.add("suite-view");
  }

  start(): void {
    clear(this.root);
    this.rowCount = 0;
    this.statusLine = el("p", "suite-status", "running…");
    this.root.appendChild(this.statusLine);
    this.table = el("table", "suite-table");
    const head = el("tr");
    for (const column of COLUMNS) {
      head.appendChild(el("th", "", column));
    }
    this.table.appendChild(head);
    this.root.appendChild(this.table);
  }

  addRow(row: SuiteRow): void {
    if (this.table === null) {
      this.start();
    }
    const tr = el("tr", `status-${row.status}`);
    tr.appendChild(el("td", "", row.phenomenon));
    tr.appendChild(el("td", "", row.sentence));
    tr.appendChild(el("td", "", expectation(row)));
    tr.appendChild(el("td", "", row.readings === null ? "" : String(row.readings)));
    tr.appendChild(el("td", "", row.status + (row.error ? ` (${row.error})` : "")));
    tr.appendChild(el("td", "", row.verdict ?? ""));
    this.table!.appendChild(tr);
    this.rowCount += 1;
    if (this.statusLine) {
      this.statusLine.textContent = `running… ${this.rowCount} sentence(s) done`;
    }
  }

  finish(table: SuiteTable): void {
    if (this.table === null) {
      this.start();
    }
    // Replace incremental rows with the final, case-ordered table.
    clear(this.table!);
    const head = el("tr");
    for (const column of COLUMNS) {
      head.appendChild(el("th", "", column));
    }
    this.table!.appendChild(head);
    this.rowCount = 0;
    for (const row of table.rows) {
      this.addRow(row);
    }
    const totals = table.totals;
    if (this.statusLine) {
      this.statusLine.textContent =
        `done: ${totals.pass} pass, ${totals.fail} fail, ${totals.error} error`;
    }
  }
}
