"""Shared fixtures: a compact one-week tape driving the full lifecycle.

The mini week (2025-10-30 batch) has two recurrent tasks (BKNG cash from
operations, CN 3-month bill) and two non-recurrent candidates (Air Liquide
expansion, US tariff action), with officials and evidence landing before
the Monday 2025-11-10 cycle. Expected scores are hand-computed in the
tests that consume this fixture.
"""
from __future__ import annotations

import json
from datetime import timedelta

import pytest

from foreval.model import isoformat, utc
from foreval.orchestrator import batch_times
from foreval.store import SourceCategory

WEEK = "2025-10-30"
T_G, T_D = batch_times(WEEK)
MONDAY = utc(2025, 11, 10, 1, 0)
FORECAST_AT = T_D - timedelta(hours=1)

AL_CAND = "cand:news-al"
C1_CAND = "cand:news-c1"
REJ_CAND = "cand:news-rej"

AL_TASK = f"{WEEK}:nr:corp:AI.PA:evt34:2025-11-07"
C1_TASK = f"{WEEK}:nr:macro:C1:US:2025-11-06"
BKNG_TASK = f"{WEEK}:rec:corp:BKNG.OQ:48:2025-q3"
CN_TASK = f"{WEEK}:rec:macro:CN.RATE_3M:november-5-2025"


def _rec(rid, category, publish, subjects, payload):
    return {
        "schema": "record/1",
        "record_id": rid,
        "source_category": category.value,
        "publish_time": isoformat(publish),
        "subject_keys": sorted(subjects),
        "payload": payload,
    }


def mini_tape_records() -> list[dict]:
    rows = []
    # calendar: one US corporate reporter, one CN macro release in the window
    rows.append(_rec(
        "cal-bkng", SourceCategory.CORPORATE_FILING, T_G - timedelta(days=1), {"BKNG.OQ"},
        {"scheduled": True, "company": "BKNG.OQ", "period": "2025 Q3",
         "metric_id": 48, "release_at": isoformat(utc(2025, 11, 5, 2, 0))},
    ))
    rows.append(_rec(
        "cal-cn-bill", SourceCategory.GOVERNMENT_RELEASE, T_G - timedelta(days=1), {"CN.RATE_3M"},
        {"scheduled": True, "indicator": "CN.RATE_3M", "period": "November 5, 2025",
         "release_at": isoformat(utc(2025, 11, 5, 4, 0))},
    ))
    # news signals for the non-recurrent pipeline
    rows.append(_rec(
        "news-al", SourceCategory.FINANCIAL_NEWS, T_G - timedelta(days=2), {"AI.PA"},
        {"headline": "Air Liquide weighs North American build-out",
         "stance": "confirm",
         "signal": {"kind": "corporate", "company": "AI.PA", "event_type": 34,
                    "predicate": "announce a new production facility in North America",
                    "cutoff": "2025-11-07"}},
    ))
    rows.append(_rec(
        "news-c1", SourceCategory.FINANCIAL_NEWS, T_G - timedelta(days=3), {"US"},
        {"headline": "Washington floats new tariff package",
         "stance": "confirm",
         "signal": {"kind": "macro", "economy": "US", "subcategory": "C1",
                    "predicate": "implement new tariff measures on strategic imports",
                    "cutoff": "2025-11-06"}},
    ))
    rows.append(_rec(
        "news-rej", SourceCategory.FINANCIAL_NEWS, T_G - timedelta(days=2, hours=3), {"AAPL.OQ"},
        {"headline": "Speculation about a buyback tweak",
         "stance": "neutral",
         "signal": {"kind": "corporate", "company": "AAPL.OQ", "event_type": 24,
                    "predicate": "modify its buyback plan terms",
                    "cutoff": "2025-11-06"}},
    ))
    # officials for resolution
    rows.append(_rec(
        "filing-bkng-q3", SourceCategory.CORPORATE_FILING, utc(2025, 11, 6, 3, 0), {"BKNG.OQ"},
        {"company": "BKNG.OQ", "period": "2025 Q3", "values": {"cash_from_operations": 1435.0}},
    ))
    rows.append(_rec(
        "release-cn-bill", SourceCategory.GOVERNMENT_RELEASE, utc(2025, 11, 5, 6, 0), {"CN.RATE_3M"},
        {"indicator": "CN.RATE_3M", "period": "November 5, 2025", "value": 1.2885},
    ))
    # evidence for the non-recurrent tasks
    rows.append(_rec(
        "pr-al-confirm", SourceCategory.CORPORATE_FILING, utc(2025, 11, 6, 9, 0), {"AI.PA"},
        {"company": "AI.PA", "event_type": 34, "stance": "confirm"},
    ))
    rows.append(_rec(
        "gov-c1-confirm", SourceCategory.GOVERNMENT_RELEASE, utc(2025, 11, 5, 12, 0), {"US"},
        {"economy": "US", "subcategory": "C1", "stance": "confirm"},
    ))
    return rows


MINI_REVIEWS = {
    AL_CAND: {"candidate_id": AL_CAND, "verdict": "Approve", "reviewer_id": "exp-1"},
    C1_CAND: {"candidate_id": C1_CAND, "verdict": "Approve", "reviewer_id": "exp-1"},
    REJ_CAND: {"candidate_id": REJ_CAND, "verdict": "Reject", "reviewer_id": "exp-1",
               "notes": "no clear predictive value"},
}

MINI_VERIFICATIONS = {
    AL_TASK: {"task_id": AL_TASK, "verdict": "Confirm", "verifier_id": "exp-2"},
    C1_TASK: {"task_id": C1_TASK, "verdict": "Override", "value": "NO",
              "verifier_id": "exp-2", "reason": "announcement missed the cutoff"},
}

# stub-alpha: BKNG within 5%, CN outside 0.1%, AL correct YES, C1 correct NO -> 75%
# stub-beta: unparsable, late, wrong, wrong -> 0%
MINI_SCRIPTS = [
    {"model_id": "stub-alpha", "task_id": BKNG_TASK, "text": "| Prediction (Numeric) | 1400.0 |"},
    {"model_id": "stub-alpha", "task_id": CN_TASK, "text": "| Prediction (Numeric) | 1.29 |"},
    {"model_id": "stub-alpha", "task_id": AL_TASK, "text": "| Prediction (YES/NO) | YES |"},
    {"model_id": "stub-alpha", "task_id": C1_TASK, "text": "| Prediction (YES/NO) | NO |"},
    {"model_id": "stub-beta", "task_id": BKNG_TASK, "text": "no idea, ask me tomorrow about it"},
    {"model_id": "stub-beta", "task_id": CN_TASK, "text": "| Prediction (Numeric) | 1.2885 |",
     "extra_delay_s": 7200.0},
    {"model_id": "stub-beta", "task_id": AL_TASK, "text": "| Prediction (YES/NO) | NO |"},
    {"model_id": "stub-beta", "task_id": C1_TASK, "text": "| Prediction (YES/NO) | YES |"},
]


@pytest.fixture()
def mini_tape(tmp_path):
    path = tmp_path / "tape.jsonl"
    path.write_text("\n".join(json.dumps(r, sort_keys=True) for r in mini_tape_records()) + "\n")
    return path


@pytest.fixture()
def mini_scripts(tmp_path):
    path = tmp_path / "responses.jsonl"
    path.write_text("\n".join(json.dumps(r, sort_keys=True) for r in MINI_SCRIPTS) + "\n")
    return path


@pytest.fixture()
def mini_adapters(tmp_path, mini_scripts):
    import yaml

    config = {
        "adapters": [
            {"model_id": "stub-alpha", "kind": "scripted", "script": str(mini_scripts),
             "limits": {"concurrency": 4, "max_retries": 2, "backoff_s": 0.0}},
            {"model_id": "stub-beta", "kind": "scripted", "script": str(mini_scripts),
             "limits": {"concurrency": 2, "max_retries": 2, "backoff_s": 0.0}},
        ],
    }
    path = tmp_path / "adapters.yaml"
    path.write_text(yaml.safe_dump(config))
    return path
