// Review queue view-model: weekly candidate cards with optimistic decisions.
//
// A card disappears the moment the expert decides; if the server rejects the
// decision the card is restored and the error surfaced. Decisions are never
// re-openable from the UI (there is deliberately no affordance and no API
// call for it).

import { ApiClient, ApiError } from "./api.js";
import type { ApprovalReport, CandidateCard, Verdict } from "./types.js";

export interface QueueState {
  cards: CandidateCard[];
  report: ApprovalReport | null;
  error: string | null;
  sessionExpired: boolean;
  lastDecision: { candidateId: string; verdict: Verdict; taskId: string } | null;
}

export class ReviewQueueModel {
  state: QueueState = {
    cards: [],
    report: null,
    error: null,
    sessionExpired: false,
    lastDecision: null,
  };

  constructor(
    private readonly client: ApiClient,
    private readonly reviewerId: string,
  ) {}

  async load(): Promise<void> {
    const response = await this.client.candidates();
    this.state.cards = response.candidates;
    this.state.report = response.approval_report;
    this.state.error = null;
  }

  /** Approval share vs the ~20% selection guideline, for the indicator. */
  approvalIndicator(): { ratePct: number | null; guidelinePct: number } {
    const report = this.state.report;
    return {
      ratePct: report?.approval_rate_pct ?? null,
      guidelinePct: report?.guideline_pct ?? 20,
    };
  }

  async decide(candidateId: string, verdict: Verdict, notes = ""): Promise<boolean> {
    const index = this.state.cards.findIndex((c) => c.candidate_id === candidateId);
    if (index < 0) return false;
    const [card] = this.state.cards.splice(index, 1); // optimistic removal
    try {
      const ack = await this.client.review(candidateId, verdict, this.reviewerId, notes);
      this.state.lastDecision = { candidateId, verdict, taskId: ack.task_id };
      this.state.error = null;
      await this.refreshReport();
      return true;
    } catch (err) {
      if (err instanceof ApiError && err.status === 403) {
        // session expired: restore and prompt for a fresh token
        this.state.cards.splice(index, 0, card as CandidateCard);
        this.state.sessionExpired = true;
        this.state.error = "session expired: enter a valid expert token";
        return false;
      }
      if (err instanceof ApiError && err.status === 409) {
        // decided elsewhere; the card stays gone, server state wins
        this.state.error = `candidate ${candidateId} was already decided elsewhere`;
        await this.refreshReport();
        return false;
      }
      // network or server failure: restore the card with a retry affordance
      this.state.cards.splice(index, 0, card as CandidateCard);
      this.state.error = err instanceof ApiError ? `decision failed: ${err.message}` : String(err);
      return false;
    }
  }

  private async refreshReport(): Promise<void> {
    try {
      const response = await this.client.candidates();
      this.state.report = response.approval_report;
    } catch {
      // indicator refresh is best-effort; the queue itself is already correct
    }
  }
}
