// Pure view builders: session JSON in, HTML strings out.  Every number
// shown comes verbatim from a service response field (display rounding
// only); nothing is recomputed on the client, so any rendered value can be
// traced back to the recorded contract fixture.

import {
  CRITERIA,
  VARIABLE_NAMES,
  type DecisionView,
  type ProfileView,
  type QuestionView,
  type ReportView,
  type SessionView,
  type StepView,
  type WeightDelta,
} from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const fmt = (x: number): string => x.toFixed(2);

export function arrowFor(delta: WeightDelta): string {
  if (delta.direction === "up") return "↑";
  if (delta.direction === "down") return "↓";
  return "·";
}

/** Markered text from the service ("[word]") becomes highlighted spans. */
export function renderHighlighted(marked: string): string {
  return escapeHtml(marked).replace(
    /\[([^\]]+)\]/g,
    '<mark class="group-word">$1</mark>',
  );
}

export function renderSentence(report: ReportView): string {
  const label = report.converged ? "corrected" : "under review";
  const changed = report.corrected_text !== report.original_text;
  return [
    `<div class="sentence" data-sentence="${escapeHtml(report.sentence_id)}">`,
    `<div class="sentence-original">${escapeHtml(report.original_text)}</div>`,
    changed
      ? `<div class="sentence-corrected">${escapeHtml(report.corrected_text)}</div>`
      : "",
    `<span class="sentence-status">${label}</span>`,
    `</div>`,
  ].join("");
}

export function renderScoreTable(decision: DecisionView): string {
  const rows: string[] = [];
  for (const sub of decision.subgroups) {
    rows.push(
      `<tr class="subgroup-head"><th colspan="${CRITERIA.length + 3}">` +
        `sub-group [${sub.members.join(" ")}]</th></tr>`,
    );
    for (const vector of sub.vectors) {
      const cells = CRITERIA.map(
        (criterion) => `<td>${fmt(vector.scores[criterion] ?? 0)}</td>`,
      ).join("");
      rows.push(
        `<tr data-value="${escapeHtml(vector.value)}"><td>${escapeHtml(vector.value)}</td>` +
          cells +
          `<td>${fmt(vector.total)}</td><td>${fmt(vector.percentage)}%</td></tr>`,
      );
    }
  }
  const heads = CRITERIA.map((c) => `<th>${c}</th>`).join("");
  return (
    `<table class="scores"><thead><tr><th></th>${heads}<th>total</th><th>share</th></tr></thead>` +
    `<tbody>${rows.join("")}</tbody></table>`
  );
}

export function renderAggregate(decision: DecisionView): string {
  const agg = decision.aggregate;
  if (!agg) return "";
  const totals = Object.entries(agg.totals)
    .map(([value, total]) => `${escapeHtml(value)} ${fmt(total)}`)
    .join(", ");
  const winner = agg.tie ? "tie" : (agg.winner ?? "none");
  return (
    `<p class="aggregate">aggregate (${escapeHtml(agg.strategy)}): ${totals}` +
    ` → <strong>${escapeHtml(winner)}</strong> (margin ${fmt(agg.margin)})</p>`
  );
}

export function renderQuestionCard(question: QuestionView): string {
  const options = question.options
    .map(
      (option) =>
        `<button class="option" data-question="${escapeHtml(question.id)}"` +
        ` data-value="${escapeHtml(option.value)}">` +
        `${escapeHtml(option.text)} <span class="share">${fmt(option.percentage)}%</span>` +
        `</button>`,
    )
    .join("");
  return [
    `<div class="question-card" data-question-id="${escapeHtml(question.id)}">`,
    `<div class="question-sentence">${renderHighlighted(question.highlighted_text)}</div>`,
    `<p class="question-prompt">${escapeHtml(question.prompt)}</p>`,
    `<div class="options">${options}</div>`,
    `</div>`,
  ].join("");
}

/** The most recent answered question's weight movements, if any. */
export function lastWeightDeltas(
  session: SessionView,
): Record<string, WeightDelta> | null {
  let latest: Record<string, WeightDelta> | null = null;
  for (const report of session.reports) {
    for (const step of report.steps) {
      if (step.asked && step.weight_deltas) latest = step.weight_deltas;
    }
  }
  return latest;
}

export function renderProfilePanel(session: SessionView): string {
  const profile = session.profile;
  const deltas = lastWeightDeltas(session);
  const rows = CRITERIA.map((criterion) => {
    const key = `k_${criterion}`;
    const value = profile[key as keyof ProfileView] as number;
    const delta = deltas?.[criterion];
    const arrow = delta
      ? `<span class="arrow ${delta.direction}">${arrowFor(delta)}</span>`
      : "";
    return `<tr data-weight="${key}"><td>${criterion}</td><td>${fmt(value)}</td><td>${arrow}</td></tr>`;
  }).join("");
  return [
    `<div class="profile-panel">`,
    `<table class="weights"><thead><tr><th>criterion</th><th>weight</th><th></th></tr></thead>`,
    `<tbody>${rows}</tbody></table>`,
    `<p class="threshold">threshold <strong data-threshold>${fmt(profile.t)}</strong>` +
      ` (floor ${fmt(profile.t_floor)}, ${profile.update_count} update(s))</p>`,
    `</div>`,
  ].join("");
}

function describeStep(step: StepView): string {
  const group = step.surfaces.join(" ");
  const variable = VARIABLE_NAMES[step.variable];
  const margin = step.decision.aggregate ? fmt(step.decision.aggregate.margin) : "-";
  if (step.decision.kind === "unresolvable") {
    return `${variable} [${escapeHtml(group)}]: unresolvable`;
  }
  const how = step.asked
    ? `asked (margin ${margin} ≤ threshold ${fmt(step.threshold_before)})`
    : step.decision.vectors.length === 1
      ? "automatic (single feasible value)"
      : `automatic (margin ${margin} &gt; threshold ${fmt(step.threshold_before)})`;
  return (
    `${variable} [${escapeHtml(group)}] → ${escapeHtml(step.applied_value ?? "?")}` +
    ` — ${how}`
  );
}

export function renderHistory(session: SessionView): string {
  const items: string[] = [];
  const trajectory: number[] = [];
  for (const report of session.reports) {
    for (const step of report.steps) {
      items.push(`<li class="${step.asked ? "asked" : "auto"}">${describeStep(step)}</li>`);
      if (step.asked) trajectory.push(step.threshold_after);
    }
  }
  if (!items.length) {
    return `<div class="history"><p class="empty">no decisions yet</p></div>`;
  }
  const start = session.reports[0]?.profile_before.t ?? session.profile.t;
  const floor = session.profile.t_floor;
  const points = [start, ...trajectory];
  const bars = points
    .map((t) => {
      const height = Math.max(4, Math.round((t / Math.max(start, 1)) * 40));
      return `<span class="t-bar" data-t="${t}" style="height:${height}px" title="${fmt(t)}"></span>`;
    })
    .join("");
  return [
    `<div class="history">`,
    `<ol class="steps">${items.join("")}</ol>`,
    `<div class="trajectory" data-floor="${floor}">threshold ${points.map(fmt).join(" → ")}<div class="t-chart">${bars}</div></div>`,
    `</div>`,
  ].join("");
}

export function renderError(body: { code: string; message: string }): string {
  return (
    `<div class="error-banner" data-code="${escapeHtml(body.code)}">` +
    `${escapeHtml(body.message)}</div>`
  );
}

export function renderSession(session: SessionView): string {
  const parts: string[] = [];
  for (const report of session.reports) {
    parts.push(renderSentence(report));
    for (const step of report.steps) {
      if (step.decision.subgroups.length) {
        parts.push(renderScoreTable(step.decision));
        parts.push(renderAggregate(step.decision));
      }
    }
    if (report.pending_decision && report.pending_decision.subgroups.length) {
      parts.push(renderScoreTable(report.pending_decision));
      parts.push(renderAggregate(report.pending_decision));
    }
  }
  if (session.pending_question) {
    parts.push(renderQuestionCard(session.pending_question));
  } else {
    parts.push(`<p class="done">${session.converged ? "no errors left" : "stopped"}</p>`);
  }
  parts.push(renderProfilePanel(session));
  parts.push(renderHistory(session));
  return `<div class="session" data-session="${escapeHtml(session.id)}">${parts.join("")}</div>`;
}
