/** Browser bootstrap: owns the single wizard state of this tab, re-renders
 * after every transition and forwards `data-action` clicks to the service
 * client. All service calls funnel through `perform`, which keeps the
 * answer controls disabled while a request is in flight.
 */

import { ApiClient, ServiceError } from "./api.js";
import * as model from "./model.js";
import type { WizardState } from "./model.js";
import { render } from "./view.js";

const api = new ApiClient("");
const root = document.getElementById("app");
if (root === null) {
  throw new Error("missing #app mount point");
}
let state: WizardState = model.initialState();

function readSetupForm(): void {
  const value = (id: string): string =>
    (document.getElementById(id) as HTMLInputElement | HTMLTextAreaElement | null)?.value ?? "";
  state = {
    ...state,
    form: {
      dpiText: value("dpi-text"),
      ld: Number.parseInt(value("ld"), 10) || 2,
      engine: (value("engine") || "dynamichs") as model.EngineName,
      heuristic: (value("heuristic") || "ent") as model.HeuristicName,
      planText: value("plan-text"),
      resumeId: value("resume-id").trim(),
    },
  };
}

function paint(): void {
  root!.innerHTML = render(state);
}

async function perform(action: () => Promise<void>, onError: (message: string) => void): Promise<void> {
  state = model.setBusy(state, true);
  paint();
  try {
    await action();
  } catch (error) {
    if (error instanceof ServiceError) {
      onError(error.message);
    } else {
      onError(`service unreachable: ${String(error)}`);
    }
  }
  state = model.setBusy(state, false);
  paint();
}

async function refreshStats(): Promise<void> {
  if (state.sessionId === null) {
    return;
  }
  state = model.applyStats(state, await api.getStats(state.sessionId));
}

const actions: Record<string, () => Promise<void>> = {
  async create() {
    readSetupForm();
    await perform(async () => {
      const body = model.createRequestBody(state.form);
      const doc = await api.createSession(body);
      state = model.beginSession(state, doc, model.componentFormulas(body.dpi));
      await refreshStats();
    }, (message) => {
      state = model.setSetupError(state, message);
    });
  },

  async resume() {
    readSetupForm();
    const sessionId = state.form.resumeId;
    if (sessionId === "") {
      state = model.setSetupError(state, "enter the id of the session to resume");
      paint();
      return;
    }
    await perform(async () => {
      const doc = await api.getSession(sessionId);
      state = model.beginSession(state, doc, {});
      await refreshStats();
    }, (message) => {
      state = model.setSetupError(state, message);
    });
  },

  "answer-positive": () => submitAnswer("positive"),
  "answer-negative": () => submitAnswer("negative"),

  async stop() {
    state = model.stopSession(state);
    if (state.sessionId !== null) {
      api.deleteSession(state.sessionId).catch(() => undefined);
    }
    paint();
  },

  async "new-session"() {
    state = model.resetToSetup(state);
    paint();
  },
};

async function submitAnswer(outcome: "positive" | "negative"): Promise<void> {
  if (state.busy || state.sessionId === null) {
    return;
  }
  await perform(async () => {
    const doc = await api.answer(state.sessionId!, outcome);
    state = model.applyState(state, doc);
    await refreshStats();
  }, (message) => {
    state = model.setServiceError(state, message);
  });
}

document.addEventListener("click", (event) => {
  const target = (event.target as HTMLElement | null)?.closest("[data-action]");
  if (target === null || target === undefined) {
    return;
  }
  const action = actions[(target as HTMLElement).dataset.action ?? ""];
  if (action !== undefined) {
    void action();
  }
});

paint();
