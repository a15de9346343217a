"""Tolerance scoring, accuracy, and leaderboard aggregation."""
from __future__ import annotations

import random

import pytest

from foreval.model import (
    AnswerKind,
    Binary,
    ForecastingProblem,
    Horizon,
    Level,
    Prediction,
    State,
    Subject,
    TaskState,
    Track,
    utc,
)
from foreval.registry import load_registry
from foreval.scoring import (
    NoData,
    Reason,
    ScoreRecord,
    ScoringError,
    accuracy,
    aggregate,
    score,
    tolerance_for,
)

T_G = utc(2025, 10, 30, 4, 0)
T_D = utc(2025, 11, 2, 15, 59)
T_E = utc(2025, 11, 5, 0, 0)


@pytest.fixture(scope="module")
def registry():
    return load_registry()


def numeric_task(task_id="t1", metric_id=48, market="US", level=Level.CORPORATE, indicator=None, horizon=Horizon.QUARTERLY, week="2025-10-30"):
    if indicator is not None:
        subject = Subject(kind="macro_indicator", indicator_id=indicator, economy=market)
        level = Level.MACRO
    else:
        subject = Subject(kind="company_metric", company_id="BKNG.OQ", metric_id=metric_id, economy=market)
    return ForecastingProblem(
        id=task_id, question="q", t_g=T_G, t_d=T_D, t_e=T_E,
        track=Track.RECURRENT, level=level, horizon=horizon,
        subject=subject, answer_kind=AnswerKind.NUMERIC,
        state=TaskState(State.RESOLVED, T_E), week=week,
    )


def binary_task(task_id="b1", market="FR", week="2025-10-30"):
    return ForecastingProblem(
        id=task_id, question="q", t_g=T_G, t_d=T_D, t_e=T_E,
        track=Track.NON_RECURRENT, level=Level.CORPORATE, horizon=Horizon.WEEKLY,
        subject=Subject(kind="corporate_event", company_id="AI.PA", event_type_id=34, economy=market),
        answer_kind=AnswerKind.BINARY,
        state=TaskState(State.RESOLVED, T_E), week=week,
    )


def pred(task, value, model="stub-a"):
    return Prediction(task_id=task.id, model_id=model, value=value, submitted_at=T_D, raw_response="")


# --- scoring oracle rows ------------------------------------------------------

def test_operating_cash_flow_miss():
    # gold 1435.0 vs predicted 2900.0 at the 5% million-scale tolerance
    t = numeric_task()
    rec = score(t, pred(t, 2900.0), 1435.0, epsilon=0.05)
    assert rec.score == 0
    assert rec.reason is Reason.OUTSIDE_TOLERANCE


def test_treasury_bill_miss():
    # gold 1.2885 vs predicted 1.35 at the 0.1% rate tolerance
    t = numeric_task(indicator="CN.RATE_3M", market="CN")
    rec = score(t, pred(t, 1.35), 1.2885, epsilon=0.001)
    assert rec.score == 0


def test_binary_mismatch_and_match():
    t = binary_task()
    assert score(t, pred(t, Binary.NO), Binary.YES).score == 0
    assert score(t, pred(t, Binary.NO), Binary.NO).score == 1
    assert score(t, pred(t, Binary.NO), Binary.NO).reason is Reason.EXACT_MATCH_BINARY


def test_strict_inequality_at_boundary():
    t = numeric_task()
    assert score(t, pred(t, 104.9), 100.0, epsilon=0.05).score == 1
    assert score(t, pred(t, 105.0), 100.0, epsilon=0.05).score == 0


def test_zero_gold_absolute_band():
    t = numeric_task()
    assert score(t, pred(t, 0.004), 0.0, epsilon=0.005).score == 1
    assert score(t, pred(t, 0.005), 0.0, epsilon=0.005).score == 0


def test_absent_late_unparsable_reasons():
    t = numeric_task()
    assert score(t, None, 10.0, epsilon=0.05).reason is Reason.NO_PREDICTION
    late = Prediction(t.id, "m", 10.0, T_D, "", late=True)
    assert score(t, late, 10.0, epsilon=0.05).reason is Reason.LATE
    bad = Prediction(t.id, "m", None, T_D, "", unparsable=True)
    assert score(t, bad, 10.0, epsilon=0.05).reason is Reason.UNPARSABLE
    for rec in (score(t, None, 10.0, epsilon=0.05), score(t, late, 10.0, epsilon=0.05)):
        assert rec.score == 0


def test_kind_mismatch_rejected():
    t = numeric_task()
    with pytest.raises(ScoringError, match="kind mismatch"):
        score(t, pred(t, Binary.YES), 1.0, epsilon=0.05)
    b = binary_task()
    with pytest.raises(ScoringError, match="kind mismatch"):
        score(b, pred(b, 1.0), Binary.YES)


def test_void_task_never_scored():
    t = numeric_task()
    voided = t.with_state(TaskState(State.VOID, T_E))
    with pytest.raises(ScoringError, match="Void"):
        score(voided, pred(t, 1.0), 1.0, epsilon=0.05)


def test_scale_equivariance():
    rng = random.Random(99)
    t = numeric_task()
    for _ in range(100):
        y = rng.uniform(-1000, 1000)
        yhat = y * (1 + rng.uniform(-0.2, 0.2))
        k = rng.uniform(0.001, 1000)
        eps = rng.choice([0.05, 0.01, 0.001])
        assert (
            score(t, pred(t, yhat), y, epsilon=eps).score
            == score(t, pred(t, yhat * k), y * k, epsilon=eps).score
        )


def test_binary_label_symmetry():
    t = binary_task()
    flip = {Binary.YES: Binary.NO, Binary.NO: Binary.YES}
    for y in Binary:
        for yhat in Binary:
            assert (
                score(t, pred(t, yhat), y).score
                == score(t, pred(t, flip[yhat]), flip[y]).score
            )


# --- tolerance resolution ----------------------------------------------------

def test_revenue_million_scale(registry):
    t = numeric_task(metric_id=26)
    assert tolerance_for(t, registry) == 0.05


def test_fx_rate_indicator(registry):
    t = numeric_task(indicator="JP.FX_RATE", market="JP", horizon=Horizon.WEEKLY)
    assert tolerance_for(t, registry) == 0.001


def test_gdp_other_macro(registry):
    t = numeric_task(indicator="CN.GDP", market="CN", horizon=Horizon.QUARTERLY)
    assert tolerance_for(t, registry) == 0.01


def test_percentage_metric(registry):
    # Gross Margin is metric 66
    t = numeric_task(metric_id=66)
    assert tolerance_for(t, registry) == 0.01


def test_scoring_resolves_epsilon_from_registry(registry):
    t = numeric_task(metric_id=26)
    rec = score(t, pred(t, 103.0), 100.0, registry=registry)
    assert rec.epsilon == 0.05
    assert rec.score == 1


# --- accuracy ----------------------------------------------------------------

def mk_records(n, zeros, **attrs):
    out = []
    for i in range(n):
        out.append(ScoreRecord(
            task_id=f"t{i}", model_id=attrs.get("model", "m"),
            score=0 if i < zeros else 1,
            reason=Reason.OUTSIDE_TOLERANCE if i < zeros else Reason.WITHIN_TOLERANCE,
            track=attrs.get("track", "Recurrent"), level=attrs.get("level", "Corporate"),
            market=attrs.get("market", "US"), horizon=attrs.get("horizon", "Quarterly"),
            week=attrs.get("week", "2025-10-30"),
        ))
    return out


def test_error_rate_50_of_247():
    records = mk_records(247, 50)
    err = 100.0 - accuracy(records)
    assert err == pytest.approx(20.24, abs=0.01)


def test_error_rate_213_of_277():
    records = mk_records(277, 213)
    err = 100.0 - accuracy(records)
    assert err == pytest.approx(76.90, abs=0.01)


def test_all_correct():
    assert accuracy(mk_records(10, 0)) == 100.0


def test_empty_accuracy_is_no_data():
    with pytest.raises(NoData):
        accuracy([])


# --- aggregation ---------------------------------------------------------------

def test_single_record_one_slice():
    slices = aggregate(mk_records(1, 0), ["model"])
    assert len(slices) == 1
    assert slices[0].n == 1


def test_aggregate_matches_naive_group_mean():
    rng = random.Random(5)
    records = []
    for i in range(300):
        records.append(ScoreRecord(
            task_id=f"t{i}", model_id=rng.choice(["a", "b", "c"]),
            score=rng.randint(0, 1), reason=Reason.WITHIN_TOLERANCE,
            track=rng.choice(["Recurrent", "NonRecurrent"]),
            level=rng.choice(["Corporate", "Macro"]),
            market=rng.choice(["US", "CN", "JP"]),
            horizon=rng.choice(["Weekly", "Monthly", "Quarterly"]),
            week=rng.choice(["2025-10-30", "2025-11-06"]),
        ))
    for keys in (["model"], ["track", "level"], ["market", "model", "week"]):
        slices = aggregate(records, keys)
        naive = {}
        for r in records:
            k = tuple(r.model_id if key == "model" else getattr(r, key) for key in keys)
            naive.setdefault(k, []).append(r.score)
        assert len(slices) == len(naive)
        for s in slices:
            vals = naive[tuple(v for _, v in s.keys)]
            assert s.n == len(vals)
            assert s.accuracy == pytest.approx(100.0 * sum(vals) / len(vals))
        assert sum(s.n for s in slices) == len(records)


def test_unknown_grouping_key():
    with pytest.raises(ScoringError, match="unknown grouping key"):
        aggregate(mk_records(1, 0), ["sector"])
