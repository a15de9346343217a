// Leaderboard explorer: grouping filters over the scored slices.
//
// Slices and the exportable file body both come from the server, so the
// export is field-for-field the same artifact the CLI writes for the same
// snapshot; a no-data result renders as its own state, never as 0%.

import { ApiClient } from "./api.js";
import type { LeaderboardResponse, LeaderboardSlice } from "./types.js";

export const GROUPING_KEYS = ["model", "track", "level", "market", "horizon", "week"] as const;

export interface LeaderboardState {
  grouping: string[];
  week: string | undefined;
  slices: LeaderboardSlice[];
  exportBody: string;
  noData: boolean;
  error: string | null;
}

export class LeaderboardModel {
  state: LeaderboardState = {
    grouping: ["model"],
    week: undefined,
    slices: [],
    exportBody: "",
    noData: false,
    error: null,
  };

  constructor(private readonly client: ApiClient) {}

  setFilters(grouping: string[], week?: string): void {
    this.state.grouping = grouping;
    this.state.week = week;
  }

  async load(): Promise<void> {
    let response: LeaderboardResponse;
    try {
      response = await this.client.leaderboard(this.state.grouping, this.state.week);
    } catch (err) {
      this.state.error = String(err);
      return;
    }
    this.state.slices = response.slices;
    this.state.exportBody = response.export;
    this.state.noData = response.no_data;
    this.state.error = null;
  }

  /** The displayed slice as a delimited file body (identical to the CLI's). */
  exportTsv(): string {
    return this.state.exportBody;
  }
}
