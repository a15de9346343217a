"""Three-stage candidate pipeline, stub analyzer, and review queue."""
from __future__ import annotations

from datetime import timedelta

import pytest

from foreval.model import State, utc
from foreval.nonrecurrent import (
    Candidate,
    PipelineError,
    ReviewDecision,
    ReviewQueue,
    Stage,
    StageViolation,
    StubAnalyzer,
    Verdict,
    assess,
    cutoff_to_te,
    detect,
    draft,
    problem_from_candidate,
    publish_on_approval,
)
from foreval.orchestrator import batch_times
from foreval.registry import load_registry
from foreval.store import Datastore, SourceCategory, TimestampedRecord

WEEK = "2025-10-30"
T_G, T_D = batch_times(WEEK)
WINDOW_START = T_G - timedelta(days=7)


@pytest.fixture(scope="module")
def registry():
    return load_registry()


def news(rid, hours_before_tg, payload, subjects):
    return TimestampedRecord(
        record_id=rid,
        source_category=SourceCategory.FINANCIAL_NEWS,
        publish_time=T_G - timedelta(hours=hours_before_tg),
        subject_keys=frozenset(subjects),
        payload=payload,
    )


AIR_LIQUIDE_SIGNAL = {
    "kind": "corporate",
    "company": "AI.PA",
    "event_type": 34,
    "predicate": "announce a new production facility in North America",
    "cutoff": "2025-12-19",
}


def seeded_store():
    store = Datastore()
    store.ingest(news("n-al-1", 24, {
        "headline": "Air Liquide said to weigh North American expansion",
        "signal": AIR_LIQUIDE_SIGNAL,
        "stance": "confirm",
    }, {"AI.PA"}))
    return store


def test_detect_partnership_rumor_candidate(registry):
    store = Datastore()
    store.ingest(news("n-p-1", 30, {
        "headline": "Chip maker in partnership talks with cloud vendor",
        "company": "NVDA.OQ",
        "cutoff": "2025-11-28",
    }, {"NVDA.OQ"}))
    out = detect(WINDOW_START, T_G, store, StubAnalyzer(), now=T_G)
    assert len(out) == 1
    assert out[0].stage is Stage.DETECTED
    assert out[0].event_type_id == 36  # strategic alliance keyword


def test_detect_empty_window(registry):
    assert detect(WINDOW_START, T_G, Datastore(), StubAnalyzer(), now=T_G) == []


def test_detect_requires_closed_window():
    with pytest.raises(PipelineError, match="closed"):
        detect(WINDOW_START, T_G, Datastore(), StubAnalyzer(), now=T_G - timedelta(days=1))


def test_detect_excludes_scheduled_releases():
    store = Datastore()
    store.ingest(news("n-cal", 20, {"scheduled": True, "headline": "earnings calendar",
                                    "signal": AIR_LIQUIDE_SIGNAL}, {"AI.PA"}))
    assert detect(WINDOW_START, T_G, store, StubAnalyzer(), now=T_G) == []


def test_detect_drops_out_of_window_citations():
    class LeakyAnalyzer(StubAnalyzer):
        def detect(self, window_records):
            sig = dict(AIR_LIQUIDE_SIGNAL)
            sig["source_record"] = "not-in-window"
            return [sig]

    store = seeded_store()
    assert detect(WINDOW_START, T_G, store, LeakyAnalyzer(), now=T_G) == []


def test_detect_surfaces_analyzer_failure():
    class BrokenAnalyzer(StubAnalyzer):
        def detect(self, window_records):
            raise RuntimeError("backend down")

    with pytest.raises(PipelineError, match="analyzer failure"):
        detect(WINDOW_START, T_G, seeded_store(), BrokenAnalyzer(), now=T_G)


def test_assess_contradicting_sources(registry):
    store = seeded_store()
    store.ingest(news("n-al-2", 10, {
        "headline": "Company denies facility plans", "stance": "deny",
    }, {"AI.PA"}))
    [cand] = detect(WINDOW_START, T_G, store, StubAnalyzer(), now=T_G)
    assessed = assess(cand, store, StubAnalyzer(), T_G)
    assert assessed.stage is Stage.ASSESSED
    assert assessed.uncertainty == 0.5
    assert assessed.evidence_record_ids


def test_assess_unanimous_sources(registry):
    store = seeded_store()
    [cand] = detect(WINDOW_START, T_G, store, StubAnalyzer(), now=T_G)
    assessed = assess(cand, store, StubAnalyzer(), T_G)
    assert assessed.uncertainty == 0.0


def test_assess_twice_is_stage_violation(registry):
    store = seeded_store()
    [cand] = detect(WINDOW_START, T_G, store, StubAnalyzer(), now=T_G)
    assessed = assess(cand, store, StubAnalyzer(), T_G)
    with pytest.raises(StageViolation):
        assess(assessed, store, StubAnalyzer(), T_G)


def test_draft_air_liquide_question(registry):
    store = seeded_store()
    [cand] = detect(WINDOW_START, T_G, store, StubAnalyzer(), now=T_G)
    drafted = draft(assess(cand, store, StubAnalyzer(), T_G), StubAnalyzer(), registry)
    assert drafted.draft_question == (
        "Is it probable that Air Liquide SA will announce a new production "
        "facility in North America by 2025-12-19?"
    )
    assert drafted.stage is Stage.DRAFTED


def test_draft_requires_assessed(registry):
    store = seeded_store()
    [cand] = detect(WINDOW_START, T_G, store, StubAnalyzer(), now=T_G)
    with pytest.raises(StageViolation):
        draft(cand, StubAnalyzer(), registry)


def test_draft_missing_cutoff_fails_answerability(registry):
    store = Datastore()
    sig = dict(AIR_LIQUIDE_SIGNAL)
    sig["cutoff"] = ""
    store.ingest(news("n-x", 24, {"headline": "x", "signal": sig}, {"AI.PA"}))
    [cand] = detect(WINDOW_START, T_G, store, StubAnalyzer(), now=T_G)
    with pytest.raises(PipelineError, match="answerability"):
        draft(assess(cand, store, StubAnalyzer(), T_G), StubAnalyzer(), registry)


def test_draft_macro_attaches_grounding_thresholds(registry):
    store = Datastore()
    store.ingest(news("n-tariff", 24, {
        "headline": "White House mulls sweeping tariff order",
        "signal": {
            "kind": "macro", "economy": "US", "subcategory": "C1",
            "predicate": "implement new tariff measures on strategic imports",
            "cutoff": "2025-11-21",
        },
    }, {"US"}))
    [cand] = detect(WINDOW_START, T_G, store, StubAnalyzer(), now=T_G)
    drafted = draft(assess(cand, store, StubAnalyzer(), T_G), StubAnalyzer(), registry)
    rule = registry.grounding_for("C1", "US")
    assert drafted.grounding_thresholds == rule.thresholds
    assert "United States" in drafted.draft_question


def test_problem_from_candidate_te_is_cutoff_eod(registry):
    store = seeded_store()
    [cand] = detect(WINDOW_START, T_G, store, StubAnalyzer(), now=T_G)
    drafted = draft(assess(cand, store, StubAnalyzer(), T_G), StubAnalyzer(), registry)
    p = problem_from_candidate(drafted, registry, T_G, T_D, WEEK)
    assert p.t_e == cutoff_to_te("2025-12-19")
    assert p.t_e == utc(2025, 12, 19, 15, 59, 59)  # 23:59:59 UTC+8
    assert p.state.value is State.DRAFT
    assert p.market == "FR"


def drafted_candidate(registry, store=None):
    store = store or seeded_store()
    [cand] = detect(WINDOW_START, T_G, store, StubAnalyzer(), now=T_G)
    return draft(assess(cand, store, StubAnalyzer(), T_G), StubAnalyzer(), registry)


def test_review_approve_publishes(registry):
    drafted = drafted_candidate(registry)
    problem = problem_from_candidate(drafted, registry, T_G, T_D, WEEK)
    decision = ReviewDecision(drafted.candidate_id, "rev-1", Verdict.APPROVE, "clear", T_G + timedelta(hours=2))
    published = publish_on_approval(problem, decision, T_G + timedelta(minutes=1))
    assert published.state.value is State.PUBLISHED
    events = [e.event.value for e in published.state.history]
    assert events == ["candidate-submitted", "expert-approve"]


def test_review_reject_voids(registry):
    drafted = drafted_candidate(registry)
    problem = problem_from_candidate(drafted, registry, T_G, T_D, WEEK)
    decision = ReviewDecision(drafted.candidate_id, "rev-1", Verdict.REJECT, "stale", T_G + timedelta(hours=2))
    voided = publish_on_approval(problem, decision, T_G + timedelta(minutes=1))
    assert voided.state.value is State.VOID


def test_double_decision_rejected(registry):
    drafted = drafted_candidate(registry)
    queue = ReviewQueue()
    queue.add(drafted)
    decision = ReviewDecision(drafted.candidate_id, "rev-1", Verdict.APPROVE, "", T_G)
    queue.decide(decision)
    with pytest.raises(PipelineError, match="double decision"):
        queue.decide(decision)


def test_unknown_candidate_rejected():
    queue = ReviewQueue()
    with pytest.raises(PipelineError, match="unknown candidate"):
        queue.decide(ReviewDecision("nope", "rev-1", Verdict.APPROVE, "", T_G))


def test_approval_rate_report(registry):
    queue = ReviewQueue()
    for i in range(100):
        queue.add(Candidate(
            candidate_id=f"cand:{i}", stage=Stage.DRAFTED, source_record_ids=(),
            kind="corporate", company_id="AI.PA", event_type_id=34,
            predicate="x", cutoff_date="2025-12-19", draft_question="q",
        ))
    for i in range(100):
        verdict = Verdict.APPROVE if i < 20 else Verdict.REJECT
        queue.decide(ReviewDecision(f"cand:{i}", "rev", verdict, "", T_G))
    report = queue.approval_report()
    assert report["approved"] == 20
    assert report["approval_rate_pct"] == 20.0
    assert report["guideline_pct"] == 20.0


def test_stage_order_never_skips():
    cand = Candidate(candidate_id="c", stage=Stage.DETECTED, source_record_ids=(), kind="corporate")
    with pytest.raises(StageViolation):
        cand.advanced(Stage.DRAFTED)
