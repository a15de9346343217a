#!/usr/bin/env python3
"""Build the shipped one-week fixture under fixtures/week1/.

Deterministic end to end: a record tape sized to the benchmark's weekly
average (30 recurrent macro + 72 recurrent corporate + 13 non-recurrent
macro + 24 non-recurrent corporate = 139 batch tasks), scripted review
decisions and expert verifications, scripted responses for three stub
models, and the adapter config. Two recurrent corporate tasks ship
without an official filing so the Pending -> Void path runs inside the
end-to-end flow.

Run from the repo root:  python3 scripts/make_week1_fixture.py
The golden leaderboard is frozen separately (scripts/freeze_golden.py)
after auditing a pipeline run.
"""
from __future__ import annotations

import json
import random
import sys
import tempfile
from datetime import timedelta
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from foreval.model import isoformat, utc  # noqa: E402
from foreval.orchestrator import batch_times, parse_response  # noqa: E402
from foreval.model import AnswerKind, Binary  # noqa: E402
from foreval.pipeline import Engine  # noqa: E402
from foreval.registry import load_registry  # noqa: E402
from foreval.scoring import RATES_FX_UNITS  # noqa: E402
from foreval.store import SourceCategory  # noqa: E402

OUT = ROOT / "fixtures" / "week1"
WEEK = "2025-10-30"
SEED = 11
T_G, T_D = batch_times(WEEK)
FORECAST_AT = T_D - timedelta(hours=1)
CYCLE_1 = utc(2025, 11, 10, 1, 0)
CYCLE_2 = utc(2025, 11, 24, 1, 0)

MODELS = ["stub-alpha", "stub-beta", "stub-gamma"]
NUMERIC_HIT_RATE = {"stub-alpha": 0.55, "stub-beta": 0.30, "stub-gamma": 0.15}
BINARY_HIT_RATE = {"stub-alpha": 0.85, "stub-beta": 0.70, "stub-gamma": 0.55}

# reporters per market; ceil(0.3 * n) sums to 72 selected
REPORTERS = {"US": 120, "JP": 40, "CN": 33, "HK": 16, "UK": 10, "FR": 9, "DE": 2, "SG": 6}
METRIC_CYCLE = [48, 26, 32, 63, 41, 66, 1, 51, 69, 78]  # mix of unit classes

# 13 approved macro event candidates (subcategory, economy, predicate, cutoff, intended truth)
MACRO_SIGNALS = [
    ("A1", "CN", "cut its key policy rate by at least 5 basis points", "2025-11-05", "YES"),
    ("C1", "US", "implement new tariff measures on strategic imports", "2025-11-06", "YES"),
    ("B1", "JP", "approve a supplementary budget above ten trillion yen", "2025-11-06", "NO"),
    ("D1", "DE", "see benchmark gas prices spike by thirty percent", "2025-11-05", "NO"),
    ("E3", "CN", "report a year-over-year decline in new home prices", "2025-11-07", "YES"),
    ("F3", "US", "see its flagship equity index enter a technical bear market", "2025-11-07", "NO"),
    ("H1", "UK", "report private-sector pay growth above six percent", "2025-11-06", "YES"),
    ("A1", "US", "raise the policy rate target range by 25 basis points", "2025-11-05", "NO"),
    ("C2", "JP", "confirm an official foreign-exchange intervention", "2025-11-07", "NO"),
    ("G1", "FR", "raise its domestic carbon levy", "2025-11-08", "NO"),
    ("I2", "SG", "raise its outbreak response level to orange", "2025-11-08", "NO"),
    ("E1", "HK", "report manufacturing PMI below fifty for a second month", "2025-11-07", "YES"),
    ("B2", "FR", "see its ten-year sovereign spread widen past eighty basis points", "2025-11-08", "NO"),
]

# 24 approved corporate candidates: (company, event type, predicate, cutoff, intended truth)
CORP_SIGNALS = [
    ("AI.PA", 34, "announce a new production facility in North America", "2025-11-07", "YES"),
    ("AAPL.OQ", 24, "authorize an expanded share repurchase program", "2025-11-06", "YES"),
    ("MSFT.OQ", 36, "announce a strategic alliance in sovereign cloud services", "2025-11-06", "NO"),
    ("NVDA.OQ", 38, "unveil a next-generation inference accelerator", "2025-11-05", "YES"),
    ("AMZN.OQ", 34, "commit to a new logistics hub in Europe", "2025-11-07", "NO"),
    ("GOOGL.OQ", 53, "receive a new antitrust inquiry", "2025-11-06", "NO"),
    ("META.OQ", 69, "announce a significant workforce reduction", "2025-11-08", "NO"),
    ("JPM.N", 19, "raise its quarterly dividend", "2025-11-06", "YES"),
    ("600519.SS", 11, "report record festival-season sales", "2025-11-07", "YES"),
    ("601318.SS", 3, "appoint a new chief investment officer", "2025-11-07", "NO"),
    ("0700.HK", 24, "expand its buyback authorization", "2025-11-06", "YES"),
    ("9988.HK", 47, "file to spin off its logistics arm", "2025-11-08", "NO"),
    ("7203.T", 12, "lower its full-year operating profit guidance", "2025-11-06", "YES"),
    ("6758.T", 38, "announce a new flagship imaging sensor", "2025-11-07", "NO"),
    ("8035.T", 13, "raise full-year guidance on AI equipment demand", "2025-11-06", "YES"),
    ("AZN.L", 55, "receive regulatory approval for a new oncology drug", "2025-11-07", "YES"),
    ("SHEL.L", 24, "announce a fresh buyback tranche", "2025-11-06", "YES"),
    ("HSBA.L", 7, "announce a reorganization of its regional units", "2025-11-08", "NO"),
    ("SAP.DE", 36, "announce a strategic alliance with a hyperscaler", "2025-11-07", "NO"),
    ("SIE.DE", 44, "announce a bolt-on industrial software acquisition", "2025-11-08", "NO"),
    ("MC.PA", 11, "report stronger holiday-quarter sales indications", "2025-11-07", "NO"),
    ("D05.SI", 19, "raise its dividend alongside results", "2025-11-06", "YES"),
    ("Z74.SI", 40, "confirm the divestiture of a regional tower portfolio", "2025-11-08", "NO"),
    ("KO.N", 18, "reaffirm its dividend", "2025-11-05", "YES"),
]

# 9 rejected candidates
REJECT_SIGNALS = [
    ("XOM.N", 38, "tease a product announcement with no substance", "2025-11-06"),
    ("PG.N", 37, "note a minor client win", "2025-11-06"),
    ("JNJ.N", 5, "relocate a satellite office", "2025-11-07"),
    ("TSLA.OQ", 50, "change a ticker display style", "2025-11-07"),
    ("OR.PA", 4, "rebrand a subsidiary", "2025-11-08"),
    ("SIE.DE", 5, "move a regional office", "2025-11-08"),
    ("AZN.L", 37, "extend a routine supplier contract", "2025-11-05"),
    ("0700.HK", 38, "preview a seasonal game patch", "2025-11-06"),
    ("7203.T", 37, "renew a fleet agreement", "2025-11-05"),
]

OVERRIDES = {
    # expert flips these two after checking primary sources
    # (task ids filled in during generation by matching signal tuples)
    ("MC.PA", 11): ("YES", "quarterly indications published before the cutoff after all"),
    ("C2", "JP"): ("YES", "ministry confirmed the intervention within the window"),
}


def macro_calendar():
    """30 scheduled indicator releases inside the prediction window."""
    rows = []
    day_cycle = [3, 4, 5, 6, 7]
    i = 0
    for type_code, economies in (
        ("STOCK_INDEX", ["US", "CN", "HK", "JP", "UK", "DE", "FR", "SG"]),
        ("RATE_3M", ["US", "CN", "HK", "JP", "UK", "DE", "FR", "SG"]),
        ("FX_RATE", ["CN", "HK", "JP", "UK", "DE", "FR", "SG"]),
        ("INTERBANK_3M", ["CN", "HK", "JP", "UK", "DE", "FR", "SG"]),
    ):
        for econ in economies:
            day = day_cycle[i % len(day_cycle)]
            release = utc(2025, 11, day, 2 + (i % 6), 0)
            period = f"November {day}, 2025"
            indicator = f"{econ}.{type_code}"
            rows.append({
                "record_id": f"cal-macro-{indicator}",
                "source_category": SourceCategory.GOVERNMENT_RELEASE.value,
                "publish_time": isoformat(T_G - timedelta(days=2)),
                "subject_keys": [indicator],
                "payload": {"scheduled": True, "indicator": indicator,
                            "period": period, "release_at": isoformat(release)},
            })
            i += 1
    assert len(rows) == 30
    return rows


def corporate_calendar(registry, rng):
    """One scheduled earnings disclosure per reporter."""
    rows = []
    by_market = {}
    for c in registry.companies:
        by_market.setdefault(c.market, []).append(c)
    for market in sorted(REPORTERS):
        pool = sorted(by_market[market], key=lambda c: c.identifier)
        n = REPORTERS[market]
        chosen = rng.sample(pool, n)
        if market == "US":
            bkng = registry.company("BKNG.OQ")
            if bkng not in chosen:
                chosen[0] = bkng
        for j, company in enumerate(sorted(chosen, key=lambda c: c.identifier)):
            metric_id = 48 if company.identifier == "BKNG.OQ" else METRIC_CYCLE[j % len(METRIC_CYCLE)]
            day = 3 + (j % 5)
            release = utc(2025, 11, day, 1 + (j % 12), 30)
            rows.append({
                "record_id": f"cal-corp-{company.identifier}",
                "source_category": SourceCategory.CORPORATE_FILING.value,
                "publish_time": isoformat(T_G - timedelta(days=3)),
                "subject_keys": [company.identifier],
                "payload": {"scheduled": True, "company": company.identifier,
                            "period": "2025 Q3", "metric_id": metric_id,
                            "release_at": isoformat(release)},
            })
    return rows


def news_records():
    rows = []
    for i, (sub, econ, predicate, cutoff, _) in enumerate(MACRO_SIGNALS):
        rows.append({
            "record_id": f"news-m{i:02d}-{sub}-{econ}",
            "source_category": SourceCategory.FINANCIAL_NEWS.value,
            "publish_time": isoformat(T_G - timedelta(days=1 + (i % 5), hours=i)),
            "subject_keys": [econ],
            "payload": {"headline": f"{econ} watchers flag a possible {sub} move",
                        "signal": {"kind": "macro", "economy": econ, "subcategory": sub,
                                   "predicate": predicate, "cutoff": cutoff}},
        })
    for i, (company, evt, predicate, cutoff, _) in enumerate(CORP_SIGNALS):
        rows.append({
            "record_id": f"news-c{i:02d}-{company}",
            "source_category": SourceCategory.FINANCIAL_NEWS.value,
            "publish_time": isoformat(T_G - timedelta(days=1 + (i % 6), hours=i % 20)),
            "subject_keys": [company],
            "payload": {"headline": f"{company} chatter points at event type {evt}",
                        "signal": {"kind": "corporate", "company": company, "event_type": evt,
                                   "predicate": predicate, "cutoff": cutoff}},
        })
    for i, (company, evt, predicate, cutoff) in enumerate(REJECT_SIGNALS):
        rows.append({
            "record_id": f"news-r{i:02d}-{company}",
            "source_category": SourceCategory.FINANCIAL_NEWS.value,
            "publish_time": isoformat(T_G - timedelta(days=2, hours=i)),
            "subject_keys": [company],
            "payload": {"headline": f"{company} minor note",
                        "signal": {"kind": "corporate", "company": company, "event_type": evt,
                                   "predicate": predicate, "cutoff": cutoff}},
        })
    # inert noise the detector must ignore
    for i in range(5):
        rows.append({
            "record_id": f"news-noise-{i}",
            "source_category": SourceCategory.FINANCIAL_NEWS.value,
            "publish_time": isoformat(T_G - timedelta(days=3, hours=i)),
            "subject_keys": [],
            "payload": {"headline": "markets drift sideways ahead of data"},
        })
    return rows


def base_value(rng, unit_class):
    if unit_class == "million-scale":
        return round(rng.uniform(80.0, 8000.0), 1)
    if unit_class in ("percentage", "ratio"):
        return round(rng.uniform(0.02, 0.45), 4)
    if unit_class == "per-share":
        return round(rng.uniform(0.2, 25.0), 2)
    if unit_class == "count":
        return round(rng.uniform(10.0, 140.0), 1)
    if unit_class in RATES_FX_UNITS:
        return round(rng.uniform(0.5, 6.5), 4)
    return round(rng.uniform(50.0, 40000.0), 2)


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    registry = load_registry()
    rng = random.Random(20251030)

    tape = macro_calendar() + corporate_calendar(registry, rng) + news_records()

    # pass 1: run generation on the calendar+news tape to learn the task set
    with tempfile.TemporaryDirectory() as tmp:
        probe = Engine(Path(tmp) / "data")
        for row in tape:
            from foreval.store import TimestampedRecord
            probe.store.ingest(TimestampedRecord.from_wire({"schema": "record/1", **row}))
        reviews = {}
        for row in news_records():
            sig = row["payload"].get("signal")
            if not sig:
                continue
            cid = f"cand:{row['record_id']}"
            reviews[cid] = {
                "candidate_id": cid,
                "verdict": "Reject" if row["record_id"].startswith("news-r") else "Approve",
                "reviewer_id": "exp-panel",
                "notes": "",
            }
        summary = probe.generate(WEEK, seed=SEED, reviews=reviews)
        assert summary["errors"] == [], summary["errors"]
        batch_tasks = {tid: probe.tasks[tid].problem for tid in probe.batches[WEEK].task_ids}
        probe.close()

    rec_corp = [t for t in batch_tasks.values() if t.subject.kind == "company_metric"]
    rec_macro = [t for t in batch_tasks.values() if t.subject.kind == "macro_indicator"]
    nr_corp = [t for t in batch_tasks.values() if t.subject.kind == "corporate_event"]
    nr_macro = [t for t in batch_tasks.values() if t.subject.kind == "macro_event"]
    print(f"batch: {len(batch_tasks)} tasks = {len(rec_macro)} rec-macro + "
          f"{len(rec_corp)} rec-corp + {len(nr_macro)} nr-macro + {len(nr_corp)} nr-corp")
    assert len(batch_tasks) == 139
    assert (len(rec_macro), len(rec_corp), len(nr_macro), len(nr_corp)) == (30, 72, 13, 24)

    # officials: all macro, all but two corporate (those go Pending -> Void)
    truths: dict[str, float | str] = {}
    unresolved = sorted(t.id for t in rec_corp)[:2]
    officials = []
    for t in sorted(rec_macro, key=lambda t: t.id):
        spec = registry.indicator(t.subject.indicator_id)
        value = 1.2885 if spec.indicator_id == "CN.RATE_3M" else base_value(rng, spec.unit_class)
        truths[t.id] = value
        officials.append({
            "record_id": f"official-{spec.indicator_id}",
            "source_category": SourceCategory.GOVERNMENT_RELEASE.value,
            "publish_time": isoformat(t.t_e - timedelta(hours=12)),
            "subject_keys": [spec.indicator_id],
            "payload": {"indicator": spec.indicator_id, "period": t.period, "value": value},
        })
    for t in sorted(rec_corp, key=lambda t: t.id):
        if t.id in unresolved:
            continue
        spec = registry.metric(t.subject.metric_id)
        value = 1435.0 if t.subject.company_id == "BKNG.OQ" else base_value(rng, spec.unit_class)
        truths[t.id] = value
        officials.append({
            "record_id": f"official-{t.subject.company_id}-q3",
            "source_category": SourceCategory.CORPORATE_FILING.value,
            "publish_time": isoformat(t.t_e - timedelta(hours=10)),
            "subject_keys": [t.subject.company_id],
            "payload": {"company": t.subject.company_id, "period": "2025 Q3",
                        "values": {spec.value_key: value}},
        })

    # evidence + final truths for non-recurrent tasks
    intended = {}
    for sub, econ, _, cutoff, truth in MACRO_SIGNALS:
        intended[("macro", sub, econ)] = truth
    for company, evt, _, cutoff, truth in CORP_SIGNALS:
        intended[("corporate", company, evt)] = truth

    evidence = []
    verifications = []
    for t in sorted(nr_macro + nr_corp, key=lambda t: t.id):
        if t.subject.kind == "macro_event":
            key = ("macro", t.subject.subcategory, t.subject.economy)
            okey = (t.subject.subcategory, t.subject.economy)
            payload_base = {"economy": t.subject.economy, "subcategory": t.subject.subcategory}
            subjects = [t.subject.economy]
            category = SourceCategory.GOVERNMENT_RELEASE.value
        else:
            key = ("corporate", t.subject.company_id, t.subject.event_type_id)
            okey = (t.subject.company_id, t.subject.event_type_id)
            payload_base = {"company": t.subject.company_id, "event_type": t.subject.event_type_id}
            subjects = [t.subject.company_id]
            category = SourceCategory.CORPORATE_FILING.value
        automated = intended[key]
        if automated == "YES":
            evidence.append({
                "record_id": f"evid-confirm-{t.id.replace(':', '_')}",
                "source_category": category,
                "publish_time": isoformat(t.t_e - timedelta(hours=6)),
                "subject_keys": subjects,
                "payload": {**payload_base, "stance": "confirm"},
            })
        # CN A1 additionally satisfies its grounding threshold via observations
        if key == ("macro", "A1", "CN"):
            evidence.append({
                "record_id": "evid-obs-a1-cn",
                "source_category": SourceCategory.GOVERNMENT_RELEASE.value,
                "publish_time": isoformat(t.t_e - timedelta(hours=5)),
                "subject_keys": ["CN"],
                "payload": {**payload_base, "observations": {"policy_rate_change_bps": 10.0}},
            })
        override = OVERRIDES.get(okey)
        if override is not None:
            final, reason = override
            verifications.append({
                "task_id": t.id, "verdict": "Override", "value": final,
                "verifier_id": "exp-panel", "reason": reason,
            })
            truths[t.id] = final
        else:
            verifications.append({"task_id": t.id, "verdict": "Confirm", "verifier_id": "exp-panel"})
            truths[t.id] = automated

    # scripted responses for the three stub models
    responses = []
    specials = {
        ("stub-alpha", f"{WEEK}:rec:corp:BKNG.OQ:48:2025-q3"):
            {"text": f"After reviewing the filings, the answer is {1435.0 * 1.02:.1f} million"},
        ("stub-beta", sorted(t.id for t in rec_macro)[0]):
            {"text": "I cannot commit to a number this week"},
        ("stub-beta", sorted(t.id for t in nr_corp)[0]):
            {"text": "| Prediction (YES/NO) | YES or NO |"},
        ("stub-gamma", sorted(t.id for t in rec_corp)[2]):
            {"text": "| Prediction (Numeric) | 100.0 |", "extra_delay_s": 250000.0},
    }
    for t in sorted(batch_tasks.values(), key=lambda t: t.id):
        truth = truths.get(t.id)
        for model in MODELS:
            special = specials.get((model, t.id))
            if special is not None:
                responses.append({"model_id": model, "task_id": t.id, **special})
                continue
            if t.answer_kind is AnswerKind.NUMERIC:
                if truth is None:  # never resolves; answer anything
                    text = "| Prediction (Numeric) | 123.0 |"
                else:
                    eps = 0.05 if t.level.value == "Corporate" else (
                        0.001 if registry.indicator(t.subject.indicator_id).unit_class in RATES_FX_UNITS
                        else 0.01
                    )
                    if t.level.value == "Corporate":
                        spec = registry.metric(t.subject.metric_id)
                        eps = {"million-scale": 0.05, "percentage": 0.01, "ratio": 0.01,
                               "per-share": 0.05, "count": 0.01}[spec.unit_class]
                    hit = rng.random() < NUMERIC_HIT_RATE[model]
                    if hit:
                        guess = truth * (1 + rng.uniform(-0.8, 0.8) * eps)
                    else:
                        guess = truth * (1 + rng.choice([-1, 1]) * eps * rng.uniform(1.5, 8.0))
                    text = f"| Prediction (Numeric) | {guess:.8g} |"
                    parsed = parse_response(text, AnswerKind.NUMERIC)
                    within = abs((parsed - truth) / truth) < eps
                    if within != hit:  # formatting nudged it over the line; re-aim
                        guess = truth * (1 + (0.2 if hit else 3.0) * eps * rng.choice([-1, 1]))
                        text = f"| Prediction (Numeric) | {guess:.8g} |"
            else:
                hit = rng.random() < BINARY_HIT_RATE[model]
                answer = truth if hit else ("NO" if truth == "YES" else "YES")
                text = f"| Field | Value |\n|-------|-------|\n| Prediction (YES/NO) | {answer} |"
            responses.append({"model_id": model, "task_id": t.id, "text": text})

    # reviews file
    review_rows = []
    for row in news_records():
        if not row["payload"].get("signal"):
            continue
        cid = f"cand:{row['record_id']}"
        review_rows.append({
            "candidate_id": cid,
            "verdict": "Reject" if row["record_id"].startswith("news-r") else "Approve",
            "reviewer_id": "exp-panel",
            "notes": "",
        })

    def dump(name, rows):
        path = OUT / name
        path.write_text("\n".join(json.dumps(r, sort_keys=True) for r in rows) + "\n",
                        encoding="utf-8")
        print(f"wrote {path.relative_to(ROOT)}: {len(rows)} rows")

    dump("tape.jsonl", [{"schema": "record/1", **r} for r in tape + officials + evidence])
    dump("reviews.jsonl", review_rows)
    dump("verifications.jsonl", verifications)
    dump("responses.jsonl", responses)

    adapters = "\n".join([
        "adapters:",
        "  - model_id: stub-alpha",
        "    kind: scripted",
        "    script: responses.jsonl",
        "    capabilities: [thinking, search]",
        "    cutoff_support: true",
        "    limits: {concurrency: 8, min_interval_s: 0.0, max_retries: 2, backoff_s: 0.0}",
        "  - model_id: stub-beta",
        "    kind: scripted",
        "    script: responses.jsonl",
        "    capabilities: [thinking]",
        "    cutoff_support: true",
        "    limits: {concurrency: 4, min_interval_s: 0.0, max_retries: 2, backoff_s: 0.0}",
        "  - model_id: stub-gamma",
        "    kind: scripted",
        "    script: responses.jsonl",
        "    capabilities: [deep-research]",
        "    cutoff_support: false",
        "    limits: {concurrency: 4, min_interval_s: 0.0, max_retries: 2, backoff_s: 0.0}",
        "",
    ])
    (OUT / "adapters.yaml").write_text(adapters, encoding="utf-8")
    print("wrote fixtures/week1/adapters.yaml")

    meta = {
        "week": WEEK,
        "seed": SEED,
        "forecast_at": isoformat(FORECAST_AT),
        "cycle_1": isoformat(CYCLE_1),
        "cycle_2": isoformat(CYCLE_2),
        "models": MODELS,
        "unresolved_tasks": unresolved,
    }
    (OUT / "meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    print("wrote fixtures/week1/meta.json")


if __name__ == "__main__":
    main()
