#!/usr/bin/env python3
"""Run the full pipeline on fixtures/week1, audit it, freeze the goldens.

Audit before freezing: every leaderboard cell is recomputed by the
independent oracle in tests/oracle_scoring.py (raw event log + registry
TSVs, no package scoring code), and a sample of score rows is printed for
hand inspection. Only on full agreement are golden_leaderboard.tsv,
golden_quadrants.tsv, and events.golden.jsonl written.
"""
from __future__ import annotations

import json
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))
sys.path.insert(0, str(ROOT / "tests"))

from oracle_scoring import naive_leaderboard  # noqa: E402

from foreval.config import load_adapter_config  # noqa: E402
from foreval.model import parse_ts  # noqa: E402
from foreval.pipeline import Engine, adapters_from_config  # noqa: E402
from foreval.reporting import write_leaderboard  # noqa: E402
from foreval.resolver import ScriptedVerifier  # noqa: E402

FIX = ROOT / "fixtures" / "week1"
REGISTRY_DIR = ROOT / "src" / "foreval" / "registry" / "data"


def load_jsonl(path, key):
    out = {}
    for line in Path(path).read_text().splitlines():
        if line.strip():
            row = json.loads(line)
            out[row[key]] = row
    return out


def run_pipeline(data_dir: Path) -> Engine:
    meta = json.loads((FIX / "meta.json").read_text())
    engine = Engine(data_dir)
    engine.store.import_tape(FIX / "tape.jsonl")
    engine.generate(meta["week"], seed=meta["seed"],
                    reviews=load_jsonl(FIX / "reviews.jsonl", "candidate_id"))
    config, base = load_adapter_config(FIX / "adapters.yaml")
    adapters = adapters_from_config(config, base_dir=base, models=meta["models"])
    engine.forecast(meta["week"], adapters, as_of=parse_ts(meta["forecast_at"]))
    verifier = ScriptedVerifier(load_jsonl(FIX / "verifications.jsonl", "task_id"))
    engine.resolve(parse_ts(meta["cycle_1"]), verifier)
    engine.resolve(parse_ts(meta["cycle_2"]), verifier)
    return engine


def main() -> None:
    with tempfile.TemporaryDirectory() as tmp:
        engine = run_pipeline(Path(tmp) / "data")
        log = Path(tmp) / "events.jsonl"
        engine.store.export_events(log)

        for grouping in (["model"], ["model", "track", "level"], ["market"]):
            slices = engine.leaderboard(grouping)
            naive = naive_leaderboard(log, REGISTRY_DIR, grouping)
            assert len(slices) == len(naive), (grouping, len(slices), len(naive))
            for s in slices:
                key = tuple(v for _, v in s.keys)
                want = naive[key]
                assert s.n == want["n"], (key, s.n, want)
                assert abs(s.accuracy - want["accuracy"]) < 1e-9, (key, s.accuracy, want)
            print(f"oracle agreement on {grouping}: {len(slices)} slices")

        # spot rows for hand inspection
        records = engine.score_records()
        print("\nsample scored rows (task, model, reason, score):")
        for r in records[:6] + records[200:206]:
            print(f"  {r.task_id}  {r.model_id}  {r.reason.value}  {r.score}")
        states = {}
        for rec in engine.tasks.values():
            states[rec.problem.state.value.value] = states.get(rec.problem.state.value.value, 0) + 1
        print(f"task states: {states}")
        print(f"score records: {len(records)}")

        write_leaderboard(engine.leaderboard(["model"]), ["model"],
                          FIX / "golden_leaderboard.tsv")
        write_leaderboard(engine.leaderboard(["model", "track", "level"]),
                          ["model", "track", "level"], FIX / "golden_quadrants.tsv")
        (FIX / "events.golden.jsonl").write_bytes(log.read_bytes())
        print("\nfroze golden_leaderboard.tsv, golden_quadrants.tsv, events.golden.jsonl")
        print((FIX / "golden_leaderboard.tsv").read_text())
        engine.close()


if __name__ == "__main__":
    main()
