// Trace stepper: streams ENTRY/EXIT/FAIL/REDO events and binds the
// step / run / abort controls and breakpoint toggles to trace-control.

import { TraceEvent } from "../api.js";
import { button, clear, el } from "../dom.js";

export interface TraceControls {
  step(): void;
  run(): void;
  abort(): void;
  setBreakpoints(categories: string[]): void;
}

export class TraceView {
  root: HTMLElement;
  log: HTMLElement;
  controls: TraceControls | null;

  constructor(root: HTMLElement, controls: TraceControls | null = null) {
    this.root = root;
    this.controls = controls;
    this.root.classList.add("trace-view");
    const bar = el("div", "trace-toolbar");
    bar.appendChild(button("step", "trace-step", () => this.controls?.step()));
    bar.appendChild(button("run", "trace-run", () => this.controls?.run()));
    bar.appendChild(button("abort", "trace-abort", () => this.controls?.abort()));
    const breakBox = el("input", "breakpoint-box") as HTMLInputElement;
    breakBox.placeholder = "breakpoints, e.g. NP,VP";
    breakBox.addEventListener("change", () => {
      const categories = breakBox.value
        .split(",")
        .map((c) => c.trim())
        .filter((c) => c.length > 0);
      this.controls?.setBreakpoints(categories);
    });
    bar.appendChild(breakBox);
    this.root.appendChild(bar);
    this.log = el("div", "trace-log");
    this.root.appendChild(this.log);
  }

  clearLog(): void {
    clear(this.log);
  }

  addEvent(event: TraceEvent): void {
    const line = el("div", `trace-event port-${event.port.toLowerCase()}`);
    const pad = " ".repeat(event.depth * 2);
    line.textContent =
      `${pad}${event.port} ${event.category}${event.features} @ ${event.position}`;
    this.log.appendChild(line);
  }

  renderAll(events: TraceEvent[]): void {
    this.clearLog();
    for (const event of events) {
      this.addEvent(event);
    }
  }
}
