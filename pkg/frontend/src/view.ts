/** Pure HTML renderers for the wizard.
 *
 * Rendering is string-in/string-out so the contract tests can assert on the
 * exact screens without a DOM. Interactive elements carry `data-action`
 * attributes; the bootstrap module wires them to the service client.
 */

import type { WizardState } from "./model.js";
import { awaitingAnswer } from "./model.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

function option(value: string, label: string, selected: boolean): string {
  return `<option value="${value}"${selected ? " selected" : ""}>${label}</option>`;
}

function errorBanner(message: string | null): string {
  if (message === null) {
    return "";
  }
  return `<p class="error" role="alert">${escapeHtml(message)}</p>`;
}

export function renderSetup(state: WizardState): string {
  const { form } = state;
  return `
<section class="card setup">
  <h2>Start a diagnosis session</h2>
  <label>System description (DPI document, JSON)
    <textarea id="dpi-text" rows="12" spellcheck="false"
      placeholder='{"components": [{"id": "ax1", "formula": "A -> B"}], "negativeTests": ["!A"]}'>${escapeHtml(form.dpiText)}</textarea>
  </label>
  <div class="grid">
    <label>Leading diagnoses (ld)
      <input id="ld" type="number" min="2" value="${form.ld}">
    </label>
    <label>Engine
      <select id="engine">
        ${option("dynamichs", "dynamichs (stateful)", form.engine === "dynamichs")}
        ${option("hstree", "hstree (stateless)", form.engine === "hstree")}
      </select>
    </label>
    <label>Query heuristic
      <select id="heuristic">
        ${option("ent", "ent (information gap)", form.heuristic === "ent")}
        ${option("spl", "spl (even split)", form.heuristic === "spl")}
        ${option("mps", "mps (max elimination)", form.heuristic === "mps")}
      </select>
    </label>
  </div>
  <label>Fixed measurement plan (optional, one sentence per line; leave empty to
    let the heuristic choose each query)
    <textarea id="plan-text" rows="3" spellcheck="false">${escapeHtml(form.planText)}</textarea>
  </label>
  ${errorBanner(state.setupError)}
  <button data-action="create" ${state.busy ? "disabled" : ""}>Start session</button>
  <div class="resume">
    <label>Resume a session by id
      <input id="resume-id" value="${escapeHtml(form.resumeId)}" placeholder="session id">
    </label>
    <button data-action="resume" ${state.busy ? "disabled" : ""}>Resume</button>
  </div>
</section>`;
}

function diagnosisChips(ids: string[], attribute = ""): string {
  return ids
    .map((id) => `<span class="chip"${attribute ? ` ${attribute}="${escapeHtml(id)}"` : ""}>${escapeHtml(id)}</span>`)
    .join("");
}

function diagnosisPanel(state: WizardState): string {
  const rows = state.rows
    .map((row) => {
      const width = Math.max(1, Math.round(row.weight * 100));
      const formulas = row.formulas
        .filter((text) => text.length > 0)
        .map((text) => `<code>${escapeHtml(text)}</code>`)
        .join(", ");
      return `
    <li>
      <div class="diag-ids">${diagnosisChips(row.ids)}
        <span class="weight-label">${(row.weight * 100).toFixed(1)}%</span></div>
      <div class="bar"><span style="width:${width}%"></span></div>
      ${formulas ? `<div class="formulas">${formulas}</div>` : ""}
    </li>`;
    })
    .join("");
  return `
<section class="card">
  <h3>Leading diagnoses (${state.rows.length})</h3>
  <ul class="diagnoses">${rows}
  </ul>
</section>`;
}

function queryPanel(state: WizardState): string {
  if (!awaitingAnswer(state) || state.query === null) {
    return "";
  }
  const disabled = state.busy ? "disabled" : "";
  return `
<section class="card query">
  <h3>Measurement ${state.iteration}</h3>
  <p class="prompt">Must it be true that <code>${escapeHtml(state.query)}</code>?</p>
  <div class="controls">
    <button data-action="answer-positive" ${disabled}>Positive — it must hold</button>
    <button data-action="answer-negative" ${disabled}>Negative — it must not</button>
    <button data-action="stop" class="secondary" ${disabled}>Stop</button>
  </div>
</section>`;
}

function outcomePanel(state: WizardState): string {
  if (state.status === "final" && state.final !== null) {
    return `
<section class="card final" data-final>
  <h3>Diagnosis isolated</h3>
  <p>The faulty components are exactly:</p>
  <div class="final-ids">${diagnosisChips(state.final, "data-final-id")}</div>
</section>`;
  }
  if (state.stopped || state.status === "script_exhausted"
      || state.status === "no_discriminating_query") {
    const reasons: Record<string, string> = {
      script_exhausted: "The measurement plan ran out before one diagnosis survived.",
      no_discriminating_query: "No candidate sentence can tell the remaining diagnoses apart.",
    };
    const reason = state.stopped
      ? "Session stopped by the operator."
      : reasons[state.status ?? ""] ?? "";
    return `
<section class="card summary" data-summary>
  <h3>Surviving diagnoses</h3>
  <p>${escapeHtml(reason)}</p>
  <ul>${state.rows.map((row) => `<li>${diagnosisChips(row.ids)}</li>`).join("")}</ul>
</section>`;
  }
  return "";
}

function historyPanel(state: WizardState): string {
  if (state.history.length === 0) {
    return "";
  }
  const items = state.history
    .map(
      (entry) => `
    <li><span class="step">${entry.iteration}</span>
      <code>${escapeHtml(entry.query)}</code>
      <span class="outcome ${entry.outcome}">${escapeHtml(entry.outcome)}</span></li>`,
    )
    .join("");
  return `
<section class="card">
  <h3>Measurement history</h3>
  <ol class="history">${items}
  </ol>
</section>`;
}

function countersPanel(state: WizardState): string {
  if (state.counters === null) {
    return "";
  }
  const { hardCalls, mediumCalls, easyCalls, maxNodesStored } = state.counters;
  return `
<section class="card counters">
  <h3>Reasoning effort</h3>
  <dl>
    <div><dt>hard calls</dt><dd data-counter="hard">${hardCalls}</dd></div>
    <div><dt>medium calls</dt><dd data-counter="medium">${mediumCalls}</dd></div>
    <div><dt>easy calls</dt><dd data-counter="easy">${easyCalls}</dd></div>
    <div><dt>nodes stored (peak)</dt><dd data-counter="stored">${maxNodesStored}</dd></div>
  </dl>
</section>`;
}

export function renderSession(state: WizardState): string {
  return `
<section class="session-head">
  <h2>Session <code>${escapeHtml(state.sessionId ?? "")}</code></h2>
  <span class="status">${escapeHtml(state.status ?? "")}</span>
  <button data-action="new-session" class="secondary">New session</button>
</section>
${errorBanner(state.serviceError)}
${outcomePanel(state)}
${queryPanel(state)}
${diagnosisPanel(state)}
${historyPanel(state)}
${countersPanel(state)}`;
}

export function render(state: WizardState): string {
  const body = state.screen === "setup" ? renderSetup(state) : renderSession(state);
  return `<main>
<h1>Sequential diagnosis</h1>
${body}
</main>`;
}
