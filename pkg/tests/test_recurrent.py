"""Calendar scanning, stratified sampling, and template instantiation."""
from __future__ import annotations

import math
import random
from datetime import timedelta

import pytest

from foreval.model import AnswerKind, Track, isoformat, utc
from foreval.orchestrator import batch_times
from foreval.recurrent import (
    DisclosureEvent,
    GenerationError,
    generate_recurrent,
    instantiate,
    sample_size,
    scan_calendar,
    stratified_sample,
)
from foreval.registry import load_registry
from foreval.store import Datastore, SourceCategory, TimestampedRecord

WEEK = "2025-10-23"
T_G, T_D = batch_times(WEEK)


@pytest.fixture(scope="module")
def registry():
    return load_registry()


def calendar_record(rid, release_at, *, company=None, indicator=None, period, metric_id=None):
    if company:
        payload = {"scheduled": True, "company": company, "period": period,
                   "release_at": isoformat(release_at)}
        if metric_id:
            payload["metric_id"] = metric_id
        category = SourceCategory.CORPORATE_FILING
        subjects = {company}
    else:
        payload = {"scheduled": True, "indicator": indicator, "period": period,
                   "release_at": isoformat(release_at)}
        category = SourceCategory.GOVERNMENT_RELEASE
        subjects = {indicator}
    return TimestampedRecord(
        record_id=rid, source_category=category,
        publish_time=T_G - timedelta(days=2),
        subject_keys=frozenset(subjects), payload=payload,
    )


def test_scan_finds_jp_cpi_release(registry):
    store = Datastore()
    release = T_D + timedelta(days=3)
    store.ingest(calendar_record("cal-1", release, indicator="JP.CPI", period="October 2025"))
    events = scan_calendar(T_D, T_D + timedelta(days=7), registry, store)
    assert len(events) == 1
    assert events[0].subject_id == "JP.CPI"
    assert events[0].kind == "macro"


def test_scan_empty_week(registry):
    store = Datastore()
    assert scan_calendar(T_D, T_D + timedelta(days=7), registry, store) == []


def test_scan_window_boundaries(registry):
    store = Datastore()
    store.ingest(calendar_record("at-td", T_D, indicator="JP.CPI", period="x"))  # exactly t_d: excluded
    store.ingest(calendar_record("at-end", T_D + timedelta(days=7), indicator="US.CPI", period="x"))
    store.ingest(calendar_record("past-end", T_D + timedelta(days=7, seconds=1), indicator="CN.CPI", period="x"))
    events = scan_calendar(T_D, T_D + timedelta(days=7), registry, store)
    assert [e.subject_id for e in events] == ["US.CPI"]


def test_sample_size_formula():
    assert sample_size(10) == 3          # ceil(3.0)
    assert sample_size(1) == 1           # floor of one
    assert sample_size(2) == 1
    assert sample_size(4) == 2           # ceil(1.2)
    assert sample_size(0) == 0


def test_stratified_sample_deterministic(registry):
    reporters = {"US": registry.reporting_companies("S&P 500")[:10]}
    a = stratified_sample(reporters, seed=7)
    b = stratified_sample(reporters, seed=7)
    assert a == b
    assert len(a["US"]) == 3
    c = stratified_sample(reporters, seed=8)
    assert len(c["US"]) == 3  # same cap even if the draw differs


def test_stratified_sample_cap_property(registry):
    rng = random.Random(42)
    pool = list(registry.companies)
    for _ in range(50):
        reporters = {}
        for economy in ("US", "CN", "JP"):
            n = rng.randint(1, 40)
            reporters[economy] = rng.sample([c for c in pool if c.market == economy], n)
        out = stratified_sample(reporters, seed=rng.randint(0, 10_000))
        for economy, selected in out.items():
            n = len(reporters[economy])
            assert len(selected) == min(n, math.ceil(0.30 * n))
            assert len(selected) >= 1
            assert set(selected) <= set(reporters[economy])


def test_cap_out_of_range(registry):
    with pytest.raises(GenerationError, match="cap out of range"):
        stratified_sample({"US": []}, cap=0.0)


def test_instantiate_corporate_question(registry):
    event = DisclosureEvent(
        subject_id="BKNG.OQ", kind="corporate",
        scheduled_release=T_D + timedelta(days=4),
        period="2025 Q3", metric_id=48,
    )
    p = instantiate(event, registry, T_G, T_D, WEEK)
    assert p.question == (
        "Using available financial data, estimate Booking Holdings Inc (BKNG)'s "
        "Cash From Operations for 2025 Q3."
    )
    assert p.answer_kind is AnswerKind.NUMERIC
    assert p.horizon.value == "Quarterly"
    assert p.t_e == event.scheduled_release + timedelta(hours=24)


def test_instantiate_macro_question(registry):
    event = DisclosureEvent(
        subject_id="CN.RATE_3M", kind="macro",
        scheduled_release=utc(2025, 10, 31, 2, 0),
        period="October 31, 2025",
    )
    p = instantiate(event, registry, T_G, T_D, WEEK)
    assert p.question == (
        "Using available economic data, estimate China's CHINA TREASURY BILL "
        "for October 31, 2025."
    )
    assert p.track is Track.RECURRENT
    assert p.t_e >= event.scheduled_release


def test_instantiate_missing_period(registry):
    event = DisclosureEvent(
        subject_id="BKNG.OQ", kind="corporate",
        scheduled_release=T_D + timedelta(days=4), period="", metric_id=48,
    )
    with pytest.raises(GenerationError, match="unresolvable slot"):
        instantiate(event, registry, T_G, T_D, WEEK)


def test_instantiate_missing_metric(registry):
    event = DisclosureEvent(
        subject_id="BKNG.OQ", kind="corporate",
        scheduled_release=T_D + timedelta(days=4), period="2025 Q3",
    )
    with pytest.raises(GenerationError, match="unresolvable slot"):
        instantiate(event, registry, T_G, T_D, WEEK)


def test_generate_recurrent_dedupes_and_validates(registry):
    store = Datastore()
    release = T_D + timedelta(days=2)
    store.ingest(calendar_record("m1", release, indicator="JP.CPI", period="October 2025"))
    store.ingest(calendar_record("c1", release, company="BKNG.OQ", period="2025 Q3", metric_id=48))
    # duplicate calendar entry for the same (subject, metric, period)
    store.ingest(calendar_record("c2", release + timedelta(hours=1), company="BKNG.OQ",
                                 period="2025 Q3", metric_id=48))
    problems = generate_recurrent(WEEK, T_G, T_D, registry, store, seed=3)
    ids = [p.id for p in problems]
    assert len(ids) == len(set(ids)) == 2
    for p in problems:
        assert p.answer_kind is AnswerKind.NUMERIC
        assert p.t_g < p.t_d < p.t_e
        assert p.t_e >= release
