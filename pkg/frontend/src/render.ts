// HTML renderers: pure functions from view-model state to markup strings,
// so every view is testable without a browser.

import type { AdjudicationState } from "./adjudication.js";
import type { LeaderboardState } from "./leaderboard.js";
import type { QueueState } from "./reviewQueue.js";
import type { CandidateCard, LeaderboardSlice, ProposalView } from "./types.js";

export function esc(text: string | number | null | undefined): string {
  return String(text ?? "")
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

export function renderCandidateCard(card: CandidateCard): string {
  const evidence = card.evidence_record_ids
    .map((id) => `<code class="evidence" title="as seen by the pipeline">${esc(id)}</code>`)
    .join(" ");
  return `
<article class="card" data-candidate="${esc(card.candidate_id)}">
  <p class="question">${esc(card.question ?? "(no draft)")}</p>
  <dl>
    <dt>Classification</dt><dd>${esc(card.classification)}</dd>
    <dt>Uncertainty</dt><dd>${esc(card.uncertainty ?? "n/a")}</dd>
    <dt>Risk notes</dt><dd>${esc(card.risk_notes)}</dd>
    <dt>Evidence</dt><dd>${evidence || "&mdash;"}</dd>
  </dl>
  <div class="actions">
    <button data-action="approve" data-candidate="${esc(card.candidate_id)}">Approve</button>
    <button data-action="reject" data-candidate="${esc(card.candidate_id)}">Reject</button>
  </div>
</article>`;
}

export function renderQueue(state: QueueState): string {
  const indicator = state.report
    ? `${state.report.approved}/${state.report.decided} decided (${
        state.report.approval_rate_pct === null
          ? "no decisions yet"
          : `${state.report.approval_rate_pct.toFixed(1)}%`
      } vs ~${state.report.guideline_pct}% guideline)`
    : "no report";
  const banner = state.sessionExpired
    ? `<div class="banner banner-auth">Session expired. Enter a fresh expert token.</div>`
    : state.error
      ? `<div class="banner banner-error">${esc(state.error)}</div>`
      : "";
  const cards = state.cards.map(renderCandidateCard).join("\n");
  return `
<section id="review-queue">
  ${banner}
  <p class="approval-indicator">Weekly approvals: ${esc(indicator)}</p>
  ${state.cards.length ? cards : `<p class="placeholder">Queue is empty.</p>`}
</section>`;
}

export function renderProposal(p: ProposalView): string {
  const phase2 = p.phase2
    .map(
      (c) =>
        `<li class="${c.satisfied ? "ok" : "miss"}">${esc(c.quantity)} ${esc(c.comparator)} ${esc(
          c.required,
        )} (observed ${esc(c.observed ?? "none")})</li>`,
    )
    .join("");
  const ids = (xs: string[]) =>
    xs.map((id) => `<code class="evidence">${esc(id)}</code>`).join(" ") || "&mdash;";
  return `
<article class="proposal" data-task="${esc(p.task_id)}">
  <p class="question">${esc(p.question)}</p>
  <p>Proposed: <strong>${esc(p.proposed)}</strong> (${esc(p.basis)})</p>
  <ol class="timeline">
    <li><h4>Phase 1: official sources</h4>${ids(p.phase1)}</li>
    <li><h4>Phase 2: threshold checks</h4><ul>${phase2 || "<li>none encoded</li>"}</ul></li>
    <li><h4>Phase 3: denials</h4>${ids(p.phase3)}</li>
  </ol>
  <p class="asof">Evidence as of ${esc(p.assembled_at)}</p>
  <div class="actions">
    <button data-action="confirm" data-task="${esc(p.task_id)}">Confirm</button>
    <button data-action="override" data-task="${esc(p.task_id)}">Override&hellip;</button>
  </div>
</article>`;
}

export function renderAdjudication(state: AdjudicationState): string {
  const conflict = state.conflict
    ? `<div class="banner banner-conflict">${esc(state.conflict)}</div>`
    : "";
  const error = state.error ? `<div class="banner banner-error">${esc(state.error)}</div>` : "";
  const audit = state.lastVerified
    ? `<p class="audit-badge">Recorded ${esc(state.lastVerified.value)} for ${esc(
        state.lastVerified.taskId,
      )}</p>`
    : "";
  return `
<section id="adjudication">
  ${conflict}${error}${audit}
  ${
    state.proposals.length
      ? state.proposals.map(renderProposal).join("\n")
      : `<p class="placeholder">Nothing awaiting verification.</p>`
  }
</section>`;
}

export function renderSliceTable(grouping: string[], slices: LeaderboardSlice[]): string {
  const head = [...grouping, "N", "accuracy"].map((h) => `<th>${esc(h)}</th>`).join("");
  const rows = slices
    .map((s) => {
      const keys = grouping.map((g) => `<td>${esc(s[g] as string)}</td>`).join("");
      return `<tr>${keys}<td>${s.n}</td><td>${s.accuracy.toFixed(4)}%</td></tr>`;
    })
    .join("\n");
  return `<table class="slices"><thead><tr>${head}</tr></thead><tbody>${rows}</tbody></table>`;
}

export function renderBars(grouping: string[], slices: LeaderboardSlice[]): string {
  const bars = slices
    .map((s) => {
      const label = grouping.map((g) => s[g]).join(" / ");
      const width = Math.max(0, Math.min(100, s.accuracy));
      return `<div class="bar-row"><span class="bar-label">${esc(label)}</span>
<span class="bar" style="width:${width.toFixed(2)}%"></span>
<span class="bar-value">${s.accuracy.toFixed(1)}% (N=${s.n})</span></div>`;
    })
    .join("\n");
  return `<div class="bars">${bars}</div>`;
}

export function renderLeaderboard(state: LeaderboardState): string {
  if (state.error) {
    return `<section id="leaderboard"><div class="banner banner-error">${esc(state.error)}</div></section>`;
  }
  if (state.noData) {
    // distinct from a 0% slice: there is nothing to aggregate
    return `<section id="leaderboard"><p class="placeholder no-data">No scored tasks for this filter.</p></section>`;
  }
  return `
<section id="leaderboard">
  ${renderSliceTable(state.grouping, state.slices)}
  ${renderBars(state.grouping, state.slices)}
  <button data-action="export">Export displayed slice</button>
</section>`;
}
