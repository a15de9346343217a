"""Binary scoring with indicator-specific tolerances, and leaderboards.

A recurrent forecast is correct when its relative error is strictly below
the tolerance for the metric's unit class or the indicator's category:

    score = 1[ |(yhat - y) / y| < epsilon ]        (recurrent)
    score = 1[ yhat == y ]                          (non-recurrent)

Accuracy over a slice is 100 * mean(score). The tolerance table is
registry data: 5% for million-scale financial metrics, 1% for percentage
and ratio metrics, 0.1% for interest rates and FX rates, 1% for other
macro indicators. Category rules take precedence over unit rules, so a
macro task never falls through to the corporate unit table.

Edge case: |y| < 1e-9 makes relative error undefined; the forecast then
scores 1 iff |yhat| < epsilon, read as an absolute band in the task's
unit, which preserves continuity as y -> 0.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .model import (
    AnswerKind,
    Binary,
    ForecastingProblem,
    Level,
    ModelError,
    Prediction,
    State,
    Track,
)
from .registry import RegistrySet

ZERO_GOLD = 1e-9
RATES_FX_UNITS = {"rate", "fx"}


class ScoringError(Exception):
    pass


class NoData(ScoringError):
    """Accuracy over an empty slice is undefined, never 0."""


class Reason(str, enum.Enum):
    WITHIN_TOLERANCE = "WithinTolerance"
    OUTSIDE_TOLERANCE = "OutsideTolerance"
    EXACT_MATCH_BINARY = "ExactMatchBinary"
    MISMATCH_BINARY = "MismatchBinary"
    UNPARSABLE = "Unparsable"
    LATE = "Late"
    NO_PREDICTION = "NoPrediction"


@dataclass(frozen=True)
class ScoreRecord:
    task_id: str
    model_id: str
    score: int
    reason: Reason
    epsilon: float | None = None
    # grouping attributes copied from the task at scoring time
    track: str = ""
    level: str = ""
    market: str = ""
    horizon: str = ""
    week: str = ""

    def to_wire(self) -> dict:
        return {
            "schema": "score/1",
            "task_id": self.task_id,
            "model_id": self.model_id,
            "score": self.score,
            "reason": self.reason.value,
            "epsilon": self.epsilon,
            "track": self.track,
            "level": self.level,
            "market": self.market,
            "horizon": self.horizon,
            "week": self.week,
        }

    @staticmethod
    def from_wire(rec: dict) -> "ScoreRecord":
        return ScoreRecord(
            task_id=rec["task_id"],
            model_id=rec["model_id"],
            score=int(rec["score"]),
            reason=Reason(rec["reason"]),
            epsilon=rec.get("epsilon"),
            track=rec.get("track", ""),
            level=rec.get("level", ""),
            market=rec.get("market", ""),
            horizon=rec.get("horizon", ""),
            week=rec.get("week", ""),
        )


GROUPING_KEYS = ("model", "track", "level", "market", "horizon", "week")


@dataclass(frozen=True)
class LeaderboardSlice:
    keys: tuple[tuple[str, str], ...]  # ((key, value), ...) in request order
    n: int
    accuracy: float

    def key_dict(self) -> dict[str, str]:
        return dict(self.keys)


def tolerance_for(task: ForecastingProblem, registry: RegistrySet) -> float:
    """Resolve the tolerance for a recurrent task from the registry table.

    Macro tasks match a category rule (rates-fx vs other); corporate tasks
    match the metric's unit-class rule. Exactly one rule applies.
    """
    if task.track is not Track.RECURRENT:
        raise ScoringError(f"tolerance_for requires a recurrent task, got {task.track.value}")
    if task.level is Level.MACRO:
        spec = registry.indicator(task.subject.indicator_id)
        selector = "rates-fx" if spec.unit_class in RATES_FX_UNITS else "other"
        matches = [
            t for t in registry.tolerance_rules
            if t.selector_kind == "macro-category" and t.selector == selector
        ]
    else:
        spec = registry.metric(task.subject.metric_id)
        matches = [
            t for t in registry.tolerance_rules
            if t.selector_kind == "corporate-unit" and t.selector == spec.unit_class
        ]
    if len(matches) != 1:
        raise ScoringError(
            f"registry inconsistency: {len(matches)} tolerance rules match task {task.id}"
        )
    return matches[0].epsilon


def score(
    task: ForecastingProblem,
    prediction: Prediction | None,
    truth: float | Binary,
    epsilon: float | None = None,
    registry: RegistrySet | None = None,
) -> ScoreRecord:
    """Score one (task, prediction) pair against the resolved truth.

    Absent, late, or unparsable predictions score 0 with their reason, so
    every model shares the same denominator on the leaderboard. Void tasks
    never produce score records.
    """
    if task.state.value is State.VOID:
        raise ScoringError(f"task {task.id} is Void and must not be scored")
    if task.track is Track.RECURRENT:
        if epsilon is None:
            if registry is None:
                raise ScoringError("recurrent scoring needs epsilon or a registry")
            epsilon = tolerance_for(task, registry)
        if not isinstance(truth, (int, float)):
            raise ScoringError(f"kind mismatch: recurrent task {task.id} with non-numeric truth")
    else:
        if not isinstance(truth, Binary):
            raise ScoringError(f"kind mismatch: non-recurrent task {task.id} with non-binary truth")

    base = dict(
        task_id=task.id,
        model_id=prediction.model_id if prediction else "",
        epsilon=epsilon,
        track=task.track.value,
        level=task.level.value,
        market=task.market,
        horizon=task.horizon.value,
        week=task.week,
    )

    if prediction is None:
        return ScoreRecord(score=0, reason=Reason.NO_PREDICTION, **base)
    if prediction.late:
        return ScoreRecord(score=0, reason=Reason.LATE, **base)
    if prediction.unparsable or prediction.value is None:
        return ScoreRecord(score=0, reason=Reason.UNPARSABLE, **base)

    if task.track is Track.RECURRENT:
        if isinstance(prediction.value, Binary):
            raise ScoringError(f"kind mismatch: binary prediction on recurrent task {task.id}")
        correct = _within_tolerance(float(prediction.value), float(truth), epsilon)
        reason = Reason.WITHIN_TOLERANCE if correct else Reason.OUTSIDE_TOLERANCE
    else:
        if not isinstance(prediction.value, Binary):
            raise ScoringError(f"kind mismatch: numeric prediction on non-recurrent task {task.id}")
        correct = prediction.value == truth
        reason = Reason.EXACT_MATCH_BINARY if correct else Reason.MISMATCH_BINARY
    return ScoreRecord(score=1 if correct else 0, reason=reason, **base)


def _within_tolerance(yhat: float, y: float, epsilon: float) -> bool:
    if abs(y) < ZERO_GOLD:
        return abs(yhat) < epsilon
    return abs((yhat - y) / y) < epsilon


def accuracy(records: list[ScoreRecord]) -> float:
    """Percentage of correct forecasts; undefined (raises) on empty input."""
    if not records:
        raise NoData("accuracy over zero records is undefined")
    return 100.0 * sum(r.score for r in records) / len(records)


def aggregate(records: list[ScoreRecord], grouping: list[str]) -> list[LeaderboardSlice]:
    """Partition score records by the grouping keys and compute each slice.

    Slices partition the input: the sum of slice sizes equals the total
    record count for any choice of keys.
    """
    for key in grouping:
        if key not in GROUPING_KEYS:
            raise ScoringError(f"unknown grouping key {key!r} (choose from {GROUPING_KEYS})")
    groups: dict[tuple[str, ...], list[ScoreRecord]] = {}
    for rec in records:
        values = tuple(_group_value(rec, k) for k in grouping)
        groups.setdefault(values, []).append(rec)
    slices = []
    for values in sorted(groups):
        members = groups[values]
        slices.append(LeaderboardSlice(
            keys=tuple(zip(grouping, values)),
            n=len(members),
            accuracy=accuracy(members),
        ))
    return slices


def _group_value(rec: ScoreRecord, key: str) -> str:
    if key == "model":
        return rec.model_id
    return getattr(rec, key)
