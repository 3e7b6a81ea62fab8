// Typed client for the workbench JSON protocol (docs/protocol.md).
// The UI performs no parsing logic: everything rendered comes verbatim
// from these payloads.

export interface Diagnostic {
  severity: string;
  message: string;
  file: string;
  line: number;
  col: number;
}

export interface Finding {
  severity: string;
  kind: string;
  witness: string[];
  message: string;
  locations: { file: string; line: number }[];
}

export interface TreeNode {
  label: string;
  span: [number, number];
  features: string;
  children: TreeNode[];
}

export interface Reading {
  tree: TreeNode;
  fstructure: string | null;
  fstructure_indented?: string | null;
}

export interface FragmentSpan {
  from: number;
  to: number;
  label: string;
  edge_id: number | null;
  is_word: boolean;
}

export interface FragmentReport {
  fragments: FragmentSpan[];
  coverage: number;
}

export interface ParsePayload {
  session: string;
  fingerprint: string | null;
  sentence: string;
  tokens: string[];
  engine: string;
  readings: Reading[];
  warnings: string[];
  aborted: boolean;
  fragments?: FragmentReport;
  paths?: { edges: FragmentSpan[] }[];
  trace?: TraceEvent[];
}

export interface ChartEdge {
  id: number;
  from: number;
  to: number;
  label: string;
  state: string;
  kind: string;
  features: string;
  children: number[];
  needed: number;
}

export interface ChartPayload {
  tokens: string[];
  edges: ChartEdge[];
}

export interface TraceEvent {
  seq: number;
  port: string;
  category: string;
  features: string;
  depth: number;
  position: number;
  goal: number;
}

export interface IndexRule {
  rule: string;
  line: number;
  file: string;
}

export interface IndexEntry {
  symbol: string;
  defined_by: IndexRule[];
  referenced_by: IndexRule[];
}

export interface IndexPayload {
  index: Record<string, IndexEntry>;
}

export interface GrammarLoadPayload {
  session: string;
  fingerprint: string;
  formalism: string;
  rules: number;
  findings: Finding[];
}

export interface ComparisonReport {
  verdict: string;
  path: number[] | null;
  detail: Record<string, unknown>;
}

export interface ComparePayload {
  verdict: string;
  summary: string;
  old_count: number;
  new_count: number;
  reports: ComparisonReport[];
  baseline_warnings?: string[];
}

export interface SuiteRow {
  phenomenon: string;
  sentence: string;
  good: boolean;
  expected_readings: number | null;
  readings: number | null;
  status: string;
  verdict: string | null;
  error: string | null;
  elapsed_ms: number;
}

export interface SuiteTable {
  rows: SuiteRow[];
  totals: { pass: number; fail: number; error: number };
}

export type StreamEvent =
  | ({ type: "trace" } & TraceEvent)
  | ({ type: "result" } & ParsePayload)
  | ({ type: "progress" } & SuiteRow)
  | ({ type: "table" } & SuiteTable)
  | { type: "error"; detail: string };

export class ServiceError extends Error {
  status: number;
  body: unknown;

  constructor(status: number, body: unknown) {
    super(`service responded ${status}`);
    this.status = status;
    this.body = body;
  }
}

// Parses a text/event-stream body, invoking the handler per data: line.
export async function readSse(
  body: ReadableStream<Uint8Array>,
  handler: (event: StreamEvent) => void
): Promise<void> {
  const reader = body.getReader();
  const decoder = new TextDecoder();
  let buffer = "";
  for (;;) {
    const { done, value } = await reader.read();
    if (done) break;
    buffer += decoder.decode(value, { stream: true });
    let split: number;
    while ((split = buffer.indexOf("\n\n")) >= 0) {
      const block = buffer.slice(0, split);
      buffer = buffer.slice(split + 2);
      for (const line of block.split("\n")) {
        if (line.startsWith("data: ")) {
          handler(JSON.parse(line.slice(6)) as StreamEvent);
        }
      }
    }
  }
}

export function parseSseText(text: string): StreamEvent[] {
  const events: StreamEvent[] = [];
  for (const line of text.split("\n")) {
    if (line.startsWith("data: ")) {
      events.push(JSON.parse(line.slice(6)) as StreamEvent);
    }
  }
  return events;
}

export class ApiClient {
  base: string;
  session: string | null = null;

  constructor(base = "") {
    this.base = base;
  }

  private async request(method: string, path: string, body?: unknown): Promise<any> {
    const url = this.base + "/api/v1" + path;
    const response = await fetch(url, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json().catch(() => null);
    if (!response.ok) {
      throw new ServiceError(response.status, payload);
    }
    return payload;
  }

  async openSession(): Promise<string> {
    const payload = await this.request("POST", "/session");
    this.session = payload.session;
    return payload.session;
  }

  health(): Promise<{ status: string }> {
    return this.request("GET", "/health");
  }

  loadGrammar(body: {
    text?: string;
    path?: string;
    formalism?: string;
  }): Promise<GrammarLoadPayload> {
    return this.request("POST", "/grammar", { session: this.session, ...body });
  }

  loadLexicon(body: {
    text?: string;
    path?: string;
    rules_text?: string;
    rules_path?: string;
  }): Promise<any> {
    return this.request("POST", "/lexicon", { session: this.session, ...body });
  }

  check(): Promise<{ findings: Finding[] }> {
    return this.request("GET", `/check?session=${this.session}`);
  }

  index(): Promise<IndexPayload> {
    return this.request("GET", `/index?session=${this.session}`);
  }

  parse(sentence: string, engine?: string): Promise<ParsePayload> {
    return this.request("POST", "/parse", {
      session: this.session,
      sentence,
      engine: engine ?? null,
    });
  }

  async parseStream(
    sentence: string,
    trace: string[] | null,
    handler: (event: StreamEvent) => void,
    engine?: string
  ): Promise<void> {
    const response = await fetch(this.base + "/api/v1/parse", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({
        session: this.session,
        sentence,
        engine: engine ?? null,
        trace,
        stream: true,
      }),
    });
    if (!response.ok || response.body === null) {
      throw new ServiceError(response.status, await response.text());
    }
    await readSse(response.body, handler);
  }

  traceControl(body: {
    filter?: string[];
    breakpoints?: string[];
    mode?: string;
    steps?: number;
  }): Promise<{ warnings: string[] }> {
    return this.request("POST", "/trace-control", {
      session: this.session,
      ...body,
    });
  }

  chart(): Promise<ChartPayload> {
    return this.request("GET", `/chart?session=${this.session}`);
  }

  fragments(): Promise<any> {
    return this.request("GET", `/fragments?session=${this.session}`);
  }

  baselineSave(sentence: string): Promise<any> {
    return this.request("POST", "/baseline/save", {
      session: this.session,
      sentence,
    });
  }

  baselineCompare(sentence: string): Promise<ComparePayload> {
    return this.request("POST", "/baseline/compare", {
      session: this.session,
      sentence,
    });
  }

  async suiteRun(
    paths: string[] | null,
    texts: string[] | null,
    handler: (event: StreamEvent) => void
  ): Promise<void> {
    const response = await fetch(this.base + "/api/v1/suite/run", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ session: this.session, paths, texts }),
    });
    if (!response.ok || response.body === null) {
      throw new ServiceError(response.status, await response.text());
    }
    await readSse(response.body, handler);
  }
}
