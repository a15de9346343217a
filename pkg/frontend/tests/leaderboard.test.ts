import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { LeaderboardModel } from "../src/leaderboard.js";
import { renderLeaderboard } from "../src/render.js";
import { FakeServer } from "./fakeServer.js";

const MARKET_SLICES = [
  { market: "US", n: 516, accuracy: 40.1 },
  { market: "CN", n: 149, accuracy: 45.7 },
  { market: "HK", n: 118, accuracy: 47.9 },
  { market: "JP", n: 226, accuracy: 24.3 },
  { market: "UK", n: 111, accuracy: 40.0 },
  { market: "DE", n: 84, accuracy: 50.0 },
  { market: "FR", n: 110, accuracy: 40.9 },
  { market: "SG", n: 80, accuracy: 44.9 },
];

function modelWith(slices: typeof MARKET_SLICES, grouping: string[], exportBody: string) {
  const server = new FakeServer({ slices, grouping, exportBody });
  const client = new ApiClient("http://fake", "reader-token", server.fetch);
  const model = new LeaderboardModel(client);
  model.setFilters(grouping);
  return model;
}

describe("leaderboard explorer", () => {
  it("renders one row per market slice with table and bars", async () => {
    const model = modelWith(MARKET_SLICES, ["market"], "# schema: leaderboard/1\nmarket\tn\taccuracy");
    await model.load();
    expect(model.state.slices).toHaveLength(8);
    const html = renderLeaderboard(model.state);
    for (const s of MARKET_SLICES) {
      expect(html).toContain(`<td>${s.market}</td>`);
    }
    expect(html).toContain('<table class="slices">');
    expect(html).toContain('class="bars"');
    expect(html).toContain("Export displayed slice");
  });

  it("renders the four track/level quadrants", async () => {
    const quadrants = [
      { track: "NonRecurrent", level: "Corporate", n: 247, accuracy: 81.4 },
      { track: "NonRecurrent", level: "Macro", n: 128, accuracy: 75.0 },
      { track: "Recurrent", level: "Corporate", n: 723, accuracy: 26.2 },
      { track: "Recurrent", level: "Macro", n: 296, accuracy: 23.7 },
    ];
    const model = modelWith(quadrants as never, ["track", "level"], "body");
    await model.load();
    const html = renderLeaderboard(model.state);
    expect(model.state.slices).toHaveLength(4);
    expect(html).toContain("<td>NonRecurrent</td><td>Corporate</td>");
    expect(html).toContain("<td>Recurrent</td><td>Macro</td>");
  });

  it("exports exactly the server-provided slice body", async () => {
    const body = "# schema: leaderboard/1\nmarket\tn\taccuracy\nUS\t516\t40.1000";
    const model = modelWith(MARKET_SLICES, ["market"], body);
    await model.load();
    expect(model.exportTsv()).toBe(body);
  });

  it("renders the no-data state distinctly from a zero score", async () => {
    const empty = modelWith([], ["model"], "");
    await empty.load();
    expect(empty.state.noData).toBe(true);
    const html = renderLeaderboard(empty.state);
    expect(html).toContain("no-data");
    expect(html).not.toContain("0.0000%");

    const zero = modelWith([{ market: "US", n: 3, accuracy: 0 }] as never, ["market"], "b");
    await zero.load();
    const zeroHtml = renderLeaderboard(zero.state);
    expect(zeroHtml).toContain("0.0000%");
    expect(zeroHtml).not.toContain("no-data");
  });
});
