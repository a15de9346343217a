// Browser entry point: token screen, tabs, and event wiring. All logic
// lives in the view-models; this file only touches the DOM.

import { AdjudicationModel } from "./adjudication.js";
import { ApiClient } from "./api.js";
import { LeaderboardModel } from "./leaderboard.js";
import { renderAdjudication, renderLeaderboard, renderQueue } from "./render.js";
import { ReviewQueueModel } from "./reviewQueue.js";

const app = document.getElementById("app");
if (!app) throw new Error("missing #app root");

interface Session {
  client: ApiClient;
  queue: ReviewQueueModel;
  adjudication: AdjudicationModel;
  leaderboard: LeaderboardModel;
}

let session: Session | null = null;
let activeTab: "queue" | "adjudication" | "leaderboard" = "queue";

function tokenScreen(): string {
  return `
<form id="token-form" class="token-screen">
  <label>Service URL <input name="base" value="${location.origin}" /></label>
  <label>Session token <input name="token" type="password" autocomplete="off" /></label>
  <label>Reviewer id <input name="reviewer" value="expert" /></label>
  <button type="submit">Start session</button>
</form>`;
}

function shell(content: string): string {
  const tab = (id: string, label: string) =>
    `<button class="tab ${activeTab === id ? "active" : ""}" data-tab="${id}">${label}</button>`;
  return `
<nav>${tab("queue", "Review queue")}${tab("adjudication", "Adjudication")}${tab("leaderboard", "Leaderboard")}</nav>
<main>${content}</main>`;
}

async function redraw(): Promise<void> {
  if (!session) {
    app!.innerHTML = tokenScreen();
    return;
  }
  if (activeTab === "queue") {
    app!.innerHTML = shell(renderQueue(session.queue.state));
  } else if (activeTab === "adjudication") {
    app!.innerHTML = shell(renderAdjudication(session.adjudication.state));
  } else {
    app!.innerHTML = shell(renderLeaderboard(session.leaderboard.state));
  }
}

async function refreshActive(): Promise<void> {
  if (!session) return;
  if (activeTab === "queue") await session.queue.load();
  else if (activeTab === "adjudication") await session.adjudication.load();
  else await session.leaderboard.load();
  await redraw();
}

app.addEventListener("submit", async (event) => {
  const form = event.target as HTMLFormElement;
  if (form.id !== "token-form") return;
  event.preventDefault();
  const data = new FormData(form);
  const client = new ApiClient(String(data.get("base")), String(data.get("token")));
  const reviewer = String(data.get("reviewer"));
  session = {
    client,
    queue: new ReviewQueueModel(client, reviewer),
    adjudication: new AdjudicationModel(client, reviewer),
    leaderboard: new LeaderboardModel(client),
  };
  await refreshActive();
});

app.addEventListener("click", async (event) => {
  const target = event.target as HTMLElement;
  const tab = target.dataset?.tab;
  if (tab) {
    activeTab = tab as typeof activeTab;
    await refreshActive();
    return;
  }
  if (!session) return;
  const action = target.dataset?.action;
  if (!action) return;
  if (action === "approve" || action === "reject") {
    const id = target.dataset.candidate!;
    await session.queue.decide(id, action === "approve" ? "Approve" : "Reject");
    await redraw();
  } else if (action === "confirm") {
    await session.adjudication.confirm(target.dataset.task!);
    await redraw();
  } else if (action === "override") {
    const value = (prompt("Override value (YES or NO):") ?? "").toUpperCase();
    if (value !== "YES" && value !== "NO") return;
    const reason = prompt("Override reason (required):") ?? "";
    await session.adjudication.override(target.dataset.task!, value, reason);
    await redraw();
  } else if (action === "export") {
    const body = session.leaderboard.exportTsv();
    const blob = new Blob([body + "\n"], { type: "text/tab-separated-values" });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = `leaderboard_${session.leaderboard.state.grouping.join("-")}.tsv`;
    a.click();
    URL.revokeObjectURL(a.href);
  }
});

void redraw();
