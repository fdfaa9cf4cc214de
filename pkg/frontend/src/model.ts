/** Wizard state machine for one diagnosis session per browser tab.
 *
 * All functions are pure: they take the current state plus a service
 * document and return the next state. The model never diagnoses anything
 * itself — leading diagnoses, weights, queries, counters and history all
 * come verbatim from service responses; the only client-side data is the
 * user's own DPI paste, kept around to show each component's formula.
 */

import type { CreateSessionBody, SessionState, SessionStats } from "./api.js";

export type EngineName = "dynamichs" | "hstree";
export type HeuristicName = "ent" | "spl" | "mps";

export interface SetupForm {
  dpiText: string;
  ld: number;
  engine: EngineName;
  heuristic: HeuristicName;
  /** Optional fixed measurement plan, one sentence per line. */
  planText: string;
  resumeId: string;
}

export interface DiagnosisRow {
  ids: string[];
  weight: number;
  formulas: string[];
}

export interface HistoryEntry {
  iteration: number;
  query: string;
  outcome: string;
}

export interface Counters {
  hardCalls: number;
  mediumCalls: number;
  easyCalls: number;
  maxNodesStored: number;
}

export interface WizardState {
  screen: "setup" | "session";
  form: SetupForm;
  setupError: string | null;
  sessionId: string | null;
  status: string | null;
  iteration: number;
  rows: DiagnosisRow[];
  query: string | null;
  final: string[] | null;
  history: HistoryEntry[];
  counters: Counters | null;
  busy: boolean;
  serviceError: string | null;
  /** The operator pressed Stop before a single diagnosis survived. */
  stopped: boolean;
  /** Component id -> formula text from the pasted DPI (display only). */
  formulas: Record<string, string>;
}

export function initialState(): WizardState {
  return {
    screen: "setup",
    form: {
      dpiText: "",
      ld: 5,
      engine: "dynamichs",
      heuristic: "ent",
      planText: "",
      resumeId: "",
    },
    setupError: null,
    sessionId: null,
    status: null,
    iteration: 0,
    rows: [],
    query: null,
    final: null,
    history: [],
    counters: null,
    busy: false,
    serviceError: null,
    stopped: false,
    formulas: {},
  };
}

/** Build the create-session request from the form.
 *
 * The DPI paste is forwarded as parsed JSON when it parses, and as the raw
 * string otherwise — the service is the single authority on what a valid
 * DPI is and its parse error is surfaced inline.
 */
export function createRequestBody(form: SetupForm): CreateSessionBody {
  let dpi: unknown = form.dpiText;
  try {
    dpi = JSON.parse(form.dpiText);
  } catch {
    // leave the raw text in place; the service reports the parse error
  }
  const body: CreateSessionBody = {
    dpi,
    ld: form.ld,
    engine: form.engine,
    heuristic: form.heuristic,
  };
  const plan = form.planText
    .split("\n")
    .map((line) => line.trim())
    .filter((line) => line.length > 0);
  if (plan.length > 0) {
    body.script = plan;
  }
  return body;
}

/** Extract id -> formula text from a pasted DPI document, for display. */
export function componentFormulas(dpi: unknown): Record<string, string> {
  const table: Record<string, string> = {};
  if (typeof dpi !== "object" || dpi === null) {
    return table;
  }
  const components = (dpi as { components?: unknown }).components;
  if (!Array.isArray(components)) {
    return table;
  }
  components.forEach((entry, i) => {
    if (typeof entry !== "object" || entry === null) {
      return;
    }
    const id = (entry as { id?: unknown }).id;
    const formula = (entry as { formula?: unknown }).formula;
    const key = typeof id === "string" ? id : `ax${i + 1}`;
    if (typeof formula === "string") {
      table[key] = formula;
    }
  });
  return table;
}

function rowsFrom(doc: SessionState, formulas: Record<string, string>): DiagnosisRow[] {
  return doc.leadingDiagnoses.map((ids, i) => ({
    ids,
    weight: doc.weights[i] ?? 0,
    formulas: ids.map((id) => formulas[id] ?? ""),
  }));
}

export function beginSession(
  state: WizardState,
  doc: SessionState,
  formulas: Record<string, string>,
): WizardState {
  return {
    ...state,
    screen: "session",
    setupError: null,
    sessionId: doc.sessionId,
    status: doc.status,
    iteration: doc.iteration,
    rows: rowsFrom(doc, formulas),
    query: doc.query,
    final: doc.final,
    history: [],
    counters: null,
    busy: false,
    serviceError: null,
    stopped: false,
    formulas,
  };
}

export function applyState(state: WizardState, doc: SessionState): WizardState {
  return {
    ...state,
    sessionId: doc.sessionId,
    status: doc.status,
    iteration: doc.iteration,
    rows: rowsFrom(doc, state.formulas),
    query: doc.query,
    final: doc.final,
    serviceError: null,
  };
}

export function applyStats(state: WizardState, stats: SessionStats): WizardState {
  const history: HistoryEntry[] = [];
  for (const record of stats.iterations) {
    if (record.query !== null && record.outcome !== null) {
      history.push({ iteration: record.iteration, query: record.query, outcome: record.outcome });
    }
  }
  return {
    ...state,
    history,
    counters: {
      hardCalls: stats.totals.hardCalls ?? 0,
      mediumCalls: stats.totals.mediumCalls ?? 0,
      easyCalls: stats.totals.easyCalls ?? 0,
      maxNodesStored: stats.totals.maxNodesStored ?? 0,
    },
  };
}

export function setBusy(state: WizardState, busy: boolean): WizardState {
  return { ...state, busy };
}

export function setSetupError(state: WizardState, message: string): WizardState {
  return { ...state, setupError: message };
}

export function setServiceError(state: WizardState, message: string): WizardState {
  return { ...state, serviceError: message, busy: false };
}

export function stopSession(state: WizardState): WizardState {
  return { ...state, stopped: true, busy: false };
}

export function resetToSetup(state: WizardState): WizardState {
  return { ...initialState(), form: state.form };
}

/** True while the wizard should offer Positive/Negative/Stop controls. */
export function awaitingAnswer(state: WizardState): boolean {
  return state.screen === "session" && state.status === "awaiting_answer" && !state.stopped;
}
