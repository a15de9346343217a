#!/usr/bin/env python3
"""Prepare a live service fixture for the UI integration tests.

Runs the shipped week on a fresh data dir, but leaves work open for the
UI to do: three candidates undecided in the review queue, and two
non-recurrent tasks unverified so their proposals await adjudication.
Also freezes the CLI leaderboard exports (market and track/level) for the
field-by-field comparison, picks a free port, and writes service.yaml
plus a meta.json the tests read.

Usage: python3 prepare_fixture.py <target-dir>
"""
from __future__ import annotations

import json
import socket
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent.parent
sys.path.insert(0, str(ROOT / "src"))

from foreval.config import load_adapter_config  # noqa: E402
from foreval.model import parse_ts  # noqa: E402
from foreval.pipeline import Engine, adapters_from_config  # noqa: E402
from foreval.reporting import leaderboard_lines  # noqa: E402
from foreval.resolver import ScriptedVerifier  # noqa: E402

FIX = ROOT / "fixtures" / "week1"

UNDECIDED = [
    "cand:news-c00-AI.PA",   # the UI approves this one
    "cand:news-r00-XOM.N",   # the UI rejects this one
    "cand:news-c06-META.OQ",  # stays in the queue
]
UNVERIFIED = [
    "2025-10-30:nr:corp:MSFT.OQ:evt36:2025-11-06",  # UI confirms + double-submits
    "2025-10-30:nr:macro:C2:JP:2025-11-07",          # UI overrides with a reason
]
TOKENS = {"ui-admin": "Admin", "ui-expert": "Expert", "ui-reader": "Reader"}


def load_jsonl(path: Path, key: str) -> dict[str, dict]:
    out = {}
    for line in path.read_text().splitlines():
        if line.strip():
            row = json.loads(line)
            out[row[key]] = row
    return out


def main() -> None:
    target = Path(sys.argv[1])
    target.mkdir(parents=True, exist_ok=True)
    meta = json.loads((FIX / "meta.json").read_text())

    reviews = load_jsonl(FIX / "reviews.jsonl", "candidate_id")
    for cid in UNDECIDED:
        assert cid in reviews, f"fixture candidate {cid} missing"
        del reviews[cid]
    verifications = load_jsonl(FIX / "verifications.jsonl", "task_id")
    for tid in UNVERIFIED:
        assert tid in verifications, f"fixture task {tid} missing"
        del verifications[tid]

    engine = Engine(target / "data")
    engine.store.import_tape(FIX / "tape.jsonl")
    engine.generate(meta["week"], seed=meta["seed"], reviews=reviews)
    config, base = load_adapter_config(FIX / "adapters.yaml")
    adapters = adapters_from_config(config, base_dir=base, models=meta["models"])
    engine.forecast(meta["week"], adapters, as_of=parse_ts(meta["forecast_at"]))
    engine.resolve(parse_ts(meta["cycle_1"]), ScriptedVerifier(verifications))

    queue_ids = {c.candidate_id for c in engine.review_queue()}
    assert set(UNDECIDED) <= queue_ids, queue_ids
    pending_ids = {p.task_id for p in engine.pending_proposals()}
    assert set(UNVERIFIED) <= pending_ids, pending_ids

    for name, grouping in (("market", ["market"]), ("quadrants", ["track", "level"])):
        lines = leaderboard_lines(engine.leaderboard(grouping), grouping)
        (target / f"cli_{name}.tsv").write_text("\n".join(lines) + "\n")
    engine.close()

    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        port = s.getsockname()[1]

    (target / "service.yaml").write_text(
        "\n".join([
            f"data_dir: {target / 'data'}",
            "host: 127.0.0.1",
            f"port: {port}",
            "auth:",
            "  tokens:",
            *[f"    {token}: {role}" for token, role in TOKENS.items()],
            "",
        ])
    )
    (target / "meta.json").write_text(json.dumps({
        "base_url": f"http://127.0.0.1:{port}",
        "port": port,
        "tokens": TOKENS,
        "undecided": UNDECIDED,
        "unverified": UNVERIFIED,
        "approve_candidate": UNDECIDED[0],
        "reject_candidate": UNDECIDED[1],
        "week": meta["week"],
        "events_log": str(target / "data" / "events.jsonl"),
    }, indent=2) + "\n")
    print(json.dumps({"port": port, "target": str(target)}))


if __name__ == "__main__":
    main()
