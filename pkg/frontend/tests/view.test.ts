import { describe, expect, it } from "vitest";

import type { SessionState } from "../src/api.js";
import * as model from "../src/model.js";
import { escapeHtml, render } from "../src/view.js";

const SERVED: SessionState = {
  sessionId: "s-1",
  status: "awaiting_answer",
  iteration: 1,
  leadingDiagnoses: [["ax1", "ax3"], ["ax2", "ax5"]],
  weights: [0.5, 0.0625],
  query: "A -> C",
  final: null,
};

function sessionState(): model.WizardState {
  return model.beginSession(model.initialState(), SERVED, { ax1: "A -> !B" });
}

describe("escapeHtml", () => {
  it("neutralises markup and quotes", () => {
    expect(escapeHtml(`<b a="x">&'</b>`)).toBe("&lt;b a=&quot;x&quot;&gt;&amp;&#39;&lt;/b&gt;");
  });
});

describe("setup screen", () => {
  it("shows the form fields with current values", () => {
    let state = model.initialState();
    state = { ...state, form: { ...state.form, dpiText: '{"a": 1}', planText: "A -> C" } };
    const html = render(state);
    for (const id of ["dpi-text", "ld", "engine", "heuristic", "plan-text", "resume-id"]) {
      expect(html).toContain(`id="${id}"`);
    }
    expect(html).toContain(`{&quot;a&quot;: 1}`);
    expect(html).toContain("A -&gt; C");
    expect(html).toContain('<option value="dynamichs" selected>');
    expect(html).toContain('data-action="create"');
    expect(html).toContain('data-action="resume"');
  });

  it("shows a setup error verbatim and disables buttons while busy", () => {
    let state = model.setSetupError(model.initialState(), 'invalid JSON: line 1 <"');
    expect(render(state)).toContain("invalid JSON: line 1 &lt;&quot;");
    state = model.setBusy(state, true);
    expect(render(state)).toContain('data-action="create" disabled');
    expect(render(state)).toContain('data-action="resume" disabled');
  });
});

describe("session screen", () => {
  it("renders diagnoses with weights, bars and known formulas", () => {
    const html = render(sessionState());
    expect(html).toContain("Leading diagnoses (2)");
    expect(html).toContain("50.0%");
    expect(html).toContain("6.3%");
    expect(html).toContain('style="width:50%"');
    expect(html).toContain('style="width:6%"');
    expect(html).toContain("<code>A -&gt; !B</code>");
  });

  it("a tiny weight still draws a visible 1% bar", () => {
    const state = model.applyState(sessionState(), {
      ...SERVED,
      leadingDiagnoses: [["ax1"]],
      weights: [0.001],
    });
    expect(render(state)).toContain('style="width:1%"');
  });

  it("asks the measurement question with escaped formula and answer controls", () => {
    const html = render(sessionState());
    expect(html).toContain("Must it be true that <code>A -&gt; C</code>?");
    expect(html).toContain('data-action="answer-positive"');
    expect(html).toContain('data-action="answer-negative"');
    expect(html).toContain('data-action="stop"');
  });

  it("disables the answer controls while a request is in flight", () => {
    const html = render(model.setBusy(sessionState(), true));
    expect(html).toContain('data-action="answer-positive" disabled');
    expect(html).toContain('data-action="answer-negative" disabled');
  });

  it("the final screen highlights exactly the isolated components", () => {
    const state = model.applyState(sessionState(), {
      ...SERVED,
      status: "final",
      leadingDiagnoses: [["ax1", "ax4"]],
      weights: [1],
      query: null,
      final: ["ax1", "ax4"],
    });
    const html = render(state);
    expect([...html.matchAll(/data-final-id="([^"]+)"/g)].map((m) => m[1]))
      .toEqual(["ax1", "ax4"]);
    expect(html).toContain("Diagnosis isolated");
    expect(html).not.toContain("Must it be true");
  });

  it("stopping shows the surviving diagnoses instead of a question", () => {
    const html = render(model.stopSession(sessionState()));
    expect(html).toContain("data-summary");
    expect(html).toContain("Session stopped by the operator.");
    expect(html).not.toContain("Must it be true");
  });

  it("an exhausted measurement plan explains itself", () => {
    const state = model.applyState(sessionState(), {
      ...SERVED,
      status: "script_exhausted",
      query: null,
    });
    const html = render(state);
    expect(html).toContain("The measurement plan ran out");
    expect(html).toContain("data-summary");
  });

  it("history and counters appear once stats arrive", () => {
    const state = model.applyStats(sessionState(), {
      status: "awaiting_answer",
      final: null,
      surviving: [],
      engine: "dynamichs",
      heuristic: "ent",
      measurements: 1,
      iterations: [{ iteration: 1, query: "A -> C", outcome: "negative" }] as never,
      totals: { hardCalls: 4, mediumCalls: 3, easyCalls: 2, maxNodesStored: 8 },
    });
    const html = render(state);
    expect(html).toContain('<span class="outcome negative">negative</span>');
    expect(html).toContain('data-counter="hard">4<');
    expect(html).toContain('data-counter="stored">8<');
  });

  it("a service error is announced with an alert banner", () => {
    const html = render(model.setServiceError(sessionState(), "service unreachable: x"));
    expect(html).toContain('role="alert"');
    expect(html).toContain("service unreachable: x");
  });
});
