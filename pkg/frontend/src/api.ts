/** Typed client for the diagnosis session service.
 *
 * The client is a thin wire adapter: it never computes anything, it only
 * moves documents between the service and the wizard model. The fetch
 * implementation is injectable so contract tests can replay recorded
 * exchanges without a network or a live engine.
 */

export interface SessionState {
  sessionId: string;
  status: string;
  iteration: number;
  leadingDiagnoses: string[][];
  weights: number[];
  query: string | null;
  final: string[] | null;
}

export interface IterationReport {
  iteration: number;
  leadingDiagnoses: string[][];
  weights: number[];
  query: string | null;
  outcome: string | null;
  hardCalls: number;
  mediumCalls: number;
  easyCalls: number;
  satChecks: number;
  nodesGenerated: number;
  nodesProcessed: number;
  maxNodesStored: number;
  duplicatesStored: number;
}

export interface SessionStats {
  status: string;
  final: string[] | null;
  surviving: string[][];
  engine: string;
  heuristic: string;
  iterations: IterationReport[];
  totals: Record<string, number>;
  measurements: number;
}

export interface CreateSessionBody {
  dpi: unknown;
  ld: number;
  engine: string;
  heuristic: string;
  script?: string[];
}

export class ServiceError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
    this.name = "ServiceError";
  }
}

interface ResponseLike {
  status: number;
  json(): Promise<unknown>;
}

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<ResponseLike>;

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = globalThis.fetch as unknown as FetchLike,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: { method: string; headers?: Record<string, string>; body?: string } = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.base + path, init);
    if (response.status === 204) {
      return undefined as T;
    }
    const doc = (await response.json()) as Record<string, unknown>;
    if (response.status >= 400) {
      const message = typeof doc?.error === "string" ? doc.error : `HTTP ${response.status}`;
      throw new ServiceError(response.status, message);
    }
    return doc as T;
  }

  createSession(body: CreateSessionBody): Promise<SessionState> {
    return this.request("POST", "/sessions", body);
  }

  getSession(sessionId: string): Promise<SessionState> {
    return this.request("GET", `/sessions/${encodeURIComponent(sessionId)}`);
  }

  answer(sessionId: string, outcome: "positive" | "negative"): Promise<SessionState> {
    return this.request("POST", `/sessions/${encodeURIComponent(sessionId)}/answer`, { outcome });
  }

  getStats(sessionId: string): Promise<SessionStats> {
    return this.request("GET", `/sessions/${encodeURIComponent(sessionId)}/stats`);
  }

  deleteSession(sessionId: string): Promise<void> {
    return this.request("DELETE", `/sessions/${encodeURIComponent(sessionId)}`);
  }
}
