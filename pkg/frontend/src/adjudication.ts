// Adjudication view-model: proposed outcomes with their three-phase
// evidence timeline, and Confirm / Override controls.
//
// Override demands an explicit reason. A conflict (verified elsewhere or
// double-submitted) refreshes the view instead of overwriting anything;
// the server keeps exactly one ground truth per task either way.

import { ApiClient, ApiError } from "./api.js";
import type { ProposalView } from "./types.js";

export interface AdjudicationState {
  proposals: ProposalView[];
  error: string | null;
  conflict: string | null;
  lastVerified: { taskId: string; value: string } | null;
}

export class AdjudicationModel {
  state: AdjudicationState = {
    proposals: [],
    error: null,
    conflict: null,
    lastVerified: null,
  };

  constructor(
    private readonly client: ApiClient,
    private readonly verifierId: string,
  ) {}

  async load(): Promise<void> {
    this.state.proposals = await this.client.pendingResolutions();
    this.state.error = null;
  }

  async confirm(taskId: string): Promise<boolean> {
    return this.submit(taskId, "Confirm", {});
  }

  async override(taskId: string, value: "YES" | "NO", reason: string): Promise<boolean> {
    if (!reason.trim()) {
      this.state.error = "an override requires an explicit reason";
      return false;
    }
    return this.submit(taskId, "Override", { value, reason });
  }

  private async submit(
    taskId: string,
    verdict: "Confirm" | "Override",
    options: { value?: "YES" | "NO"; reason?: string },
  ): Promise<boolean> {
    try {
      const ack = await this.client.verify(taskId, verdict, {
        ...options,
        verifierId: this.verifierId,
      });
      this.state.lastVerified = { taskId, value: ack.value };
      this.state.proposals = this.state.proposals.filter((p) => p.task_id !== taskId);
      this.state.conflict = null;
      this.state.error = null;
      return true;
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        this.state.conflict = `task ${taskId} already has a verification; showing the latest state`;
        await this.load(); // server-authoritative refresh
        return false;
      }
      this.state.error = err instanceof ApiError ? err.message : String(err);
      return false;
    }
  }
}
