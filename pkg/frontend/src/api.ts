// Thin typed client over the service API. All state lives server-side; the
// UI never computes scores or lifecycle transitions locally.

import type {
  CandidatesResponse,
  HealthResponse,
  LeaderboardResponse,
  ProposalView,
  TaskView,
  Verdict,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private token: string,
    private readonly fetchFn: FetchLike = (input, init) => globalThis.fetch(input, init),
  ) {}

  setToken(token: string): void {
    this.token = token;
  }

  private async request<T>(path: string, init: RequestInit = {}): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}${path}`, {
        ...init,
        headers: {
          Authorization: `Bearer ${this.token}`,
          "Content-Type": "application/json",
          ...(init.headers ?? {}),
        },
      });
    } catch (err) {
      throw new ApiError(0, `network failure: ${String(err)}`);
    }
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = (await response.json()) as { detail?: unknown };
        if (body.detail !== undefined) detail = JSON.stringify(body.detail);
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  health(): Promise<HealthResponse> {
    return this.request<HealthResponse>("/health");
  }

  tasks(params: { state?: string; week?: string; market?: string } = {}): Promise<TaskView[]> {
    const query = new URLSearchParams();
    if (params.state) query.set("state", params.state);
    if (params.week) query.set("week", params.week);
    if (params.market) query.set("market", params.market);
    const qs = query.toString();
    return this.request<{ tasks: TaskView[] }>(`/tasks${qs ? `?${qs}` : ""}`).then((r) => r.tasks);
  }

  candidates(): Promise<CandidatesResponse> {
    return this.request<CandidatesResponse>("/candidates");
  }

  review(candidateId: string, verdict: Verdict, reviewerId: string, notes = ""): Promise<{ task_id: string; state: string }> {
    return this.request(`/candidates/${encodeURIComponent(candidateId)}/review`, {
      method: "POST",
      body: JSON.stringify({ verdict, reviewer_id: reviewerId, notes }),
    });
  }

  pendingResolutions(): Promise<ProposalView[]> {
    return this.request<{ proposals: ProposalView[] }>("/resolutions/pending").then(
      (r) => r.proposals,
    );
  }

  verify(
    taskId: string,
    verdict: "Confirm" | "Override",
    options: { value?: "YES" | "NO"; reason?: string; verifierId?: string } = {},
  ): Promise<{ task_id: string; value: string; state: string }> {
    return this.request(`/proposals/${encodeURIComponent(taskId)}/verify`, {
      method: "POST",
      body: JSON.stringify({
        verdict,
        value: options.value ?? null,
        reason: options.reason ?? "",
        verifier_id: options.verifierId ?? "expert",
      }),
    });
  }

  leaderboard(group: string[], week?: string): Promise<LeaderboardResponse> {
    const query = new URLSearchParams({ group: group.join(",") });
    if (week) query.set("week", week);
    return this.request<LeaderboardResponse>(`/leaderboard?${query.toString()}`);
  }
}
