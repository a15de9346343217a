"""Forecasting problem tuple, classification, and task lifecycle.

A task is the tuple (question, t_g, t_d, t_e, outcome) with a strict
temporal order t_g < t_d < t_e: generated, then forecast before the
deadline, then resolvable once the outcome is observable. The lifecycle
state machine below is shared by the generators, the orchestrator, and
the resolver; the transition log is append-only and replayable.

All timestamps are stored as UTC instants. The benchmark's Sunday-23:59
deadline is computed in UTC+8 and converted (see orchestrator).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from datetime import datetime, timedelta, timezone

VALIDITY_WINDOW = timedelta(days=14)


class ModelError(Exception):
    """Invariant violation on a domain value."""


class IllegalTransition(ModelError):
    """Lifecycle event not applicable in the current state."""


class Track(str, enum.Enum):
    RECURRENT = "Recurrent"
    NON_RECURRENT = "NonRecurrent"


class Level(str, enum.Enum):
    CORPORATE = "Corporate"
    MACRO = "Macro"


class Horizon(str, enum.Enum):
    WEEKLY = "Weekly"
    MONTHLY = "Monthly"
    QUARTERLY = "Quarterly"


class AnswerKind(str, enum.Enum):
    NUMERIC = "Numeric"
    BINARY = "Binary"


class Binary(str, enum.Enum):
    YES = "YES"
    NO = "NO"


class State(str, enum.Enum):
    DRAFT = "Draft"
    UNDER_REVIEW = "UnderReview"
    PUBLISHED = "Published"
    AWAITING_RESOLUTION = "AwaitingResolution"
    PENDING = "Pending"
    RESOLVED = "Resolved"
    VOID = "Void"


class Event(str, enum.Enum):
    CANDIDATE_SUBMITTED = "candidate-submitted"
    EXPERT_APPROVE = "expert-approve"
    EXPERT_REJECT = "expert-reject"
    DEADLINE_PASSED = "deadline-passed"
    GROUND_TRUTH_RECORDED = "ground-truth-recorded"
    RESOLUTION_FAILED = "resolution-failed"
    VALIDITY_EXPIRED = "validity-expired"


# The allowed lifecycle graph. Resolved and Void are terminal.
TRANSITIONS: dict[tuple[State, Event], State] = {
    (State.DRAFT, Event.CANDIDATE_SUBMITTED): State.UNDER_REVIEW,
    (State.UNDER_REVIEW, Event.EXPERT_APPROVE): State.PUBLISHED,
    (State.UNDER_REVIEW, Event.EXPERT_REJECT): State.VOID,
    (State.PUBLISHED, Event.DEADLINE_PASSED): State.AWAITING_RESOLUTION,
    (State.AWAITING_RESOLUTION, Event.GROUND_TRUTH_RECORDED): State.RESOLVED,
    (State.AWAITING_RESOLUTION, Event.RESOLUTION_FAILED): State.PENDING,
    (State.PENDING, Event.GROUND_TRUTH_RECORDED): State.RESOLVED,
    (State.PENDING, Event.VALIDITY_EXPIRED): State.VOID,
}


@dataclass(frozen=True)
class TransitionEntry:
    event: Event
    from_state: State
    to_state: State
    at: datetime


@dataclass(frozen=True)
class TaskState:
    """Current lifecycle value plus the full transition history."""

    value: State
    entered_at: datetime
    history: tuple[TransitionEntry, ...] = ()

    def apply(self, event: Event, now: datetime) -> "TaskState":
        return transition(self, event, now)


def transition(state: TaskState, event: Event, now: datetime) -> TaskState:
    """Apply a lifecycle event, enforcing the allowed graph.

    History is append-only and strictly increasing in time; terminal states
    (Resolved, Void) reject every event.
    """
    target = TRANSITIONS.get((state.value, event))
    if target is None:
        raise IllegalTransition(f"event {event.value!r} not allowed in state {state.value.value!r}")
    if state.history and now <= state.history[-1].at:
        raise IllegalTransition(
            f"transition at {isoformat(now)} does not advance the history "
            f"(last at {isoformat(state.history[-1].at)})"
        )
    entry = TransitionEntry(event, state.value, target, now)
    return TaskState(value=target, entered_at=now, history=state.history + (entry,))


@dataclass(frozen=True)
class Subject:
    """What a task forecasts, discriminated by kind.

    company_metric: company_id + metric_id (recurrent corporate)
    macro_indicator: indicator_id (recurrent macro)
    macro_event: subcategory + economy (non-recurrent macro)
    corporate_event: company_id + event_type_id (non-recurrent corporate)
    """

    kind: str
    company_id: str | None = None
    metric_id: int | None = None
    indicator_id: str | None = None
    subcategory: str | None = None
    economy: str | None = None
    event_type_id: int | None = None

    def key(self) -> str:
        if self.kind == "company_metric":
            return f"{self.company_id}:{self.metric_id}"
        if self.kind == "macro_indicator":
            return str(self.indicator_id)
        if self.kind == "macro_event":
            return f"{self.subcategory}:{self.economy}"
        if self.kind == "corporate_event":
            return f"{self.company_id}:evt{self.event_type_id}"
        raise ModelError(f"unknown subject kind {self.kind!r}")

    def subject_keys(self) -> frozenset[str]:
        keys = set()
        if self.company_id:
            keys.add(self.company_id)
        if self.indicator_id:
            keys.add(self.indicator_id)
        if self.economy:
            keys.add(self.economy)
        return frozenset(keys)


@dataclass(frozen=True)
class ForecastingProblem:
    id: str
    question: str
    t_g: datetime
    t_d: datetime
    t_e: datetime
    track: Track
    level: Level
    horizon: Horizon
    subject: Subject
    answer_kind: AnswerKind
    state: TaskState
    period: str = ""  # fiscal period or release-date label
    week: str = ""  # batch week (Thursday date), grouping key

    @property
    def market(self) -> str:
        if self.subject.kind in ("company_metric", "corporate_event"):
            return self.subject.economy or ""
        if self.subject.kind == "macro_indicator":
            return self.subject.economy or ""
        return self.subject.economy or ""

    def with_state(self, state: TaskState) -> "ForecastingProblem":
        return replace(self, state=state)


def validate_problem(p: ForecastingProblem) -> ForecastingProblem:
    """Check every tuple invariant; returns the problem unchanged if valid.

    Raises ModelError naming the violated invariant: strict temporal order,
    track/answer-kind coupling, and the quarterly horizon for recurrent
    corporate tasks.
    """
    if not (p.t_g < p.t_d < p.t_e):
        raise ModelError(
            f"temporal-order violation: require t_g < t_d < t_e, got "
            f"{isoformat(p.t_g)} / {isoformat(p.t_d)} / {isoformat(p.t_e)}"
        )
    if p.track is Track.RECURRENT and p.answer_kind is not AnswerKind.NUMERIC:
        raise ModelError("kind mismatch: recurrent tasks must be Numeric")
    if p.track is Track.NON_RECURRENT and p.answer_kind is not AnswerKind.BINARY:
        raise ModelError("kind mismatch: non-recurrent tasks must be Binary")
    if p.track is Track.RECURRENT and p.level is Level.CORPORATE and p.horizon is not Horizon.QUARTERLY:
        raise ModelError("horizon violation: recurrent corporate tasks are quarterly")
    return p


def void_eligible(p: ForecastingProblem, now: datetime) -> bool:
    """True once strictly more than 14 days have elapsed past t_e.

    Precondition: the task is Pending. The boundary is exclusive: at
    exactly t_e + 14 days the task is still eligible for resolution.
    """
    if p.state.value is not State.PENDING:
        raise ModelError(f"void_eligible requires a Pending task, got {p.state.value.value}")
    return now > p.t_e + VALIDITY_WINDOW


@dataclass(frozen=True)
class Prediction:
    task_id: str
    model_id: str
    value: float | Binary | None  # None when unparsable
    submitted_at: datetime
    raw_response: str
    late: bool = False
    unparsable: bool = False
    isolation_unverified: bool = False


class TruthMethod(str, enum.Enum):
    OFFICIAL_EXTRACT = "OfficialExtract"
    ADJUDICATED_EXPERT_VERIFIED = "AdjudicatedExpertVerified"


@dataclass(frozen=True)
class GroundTruthRecord:
    task_id: str
    value: float | Binary
    determined_at: datetime
    method: TruthMethod
    evidence_refs: tuple[str, ...] = ()

    def validate(self, task: ForecastingProblem) -> "GroundTruthRecord":
        if self.determined_at < task.t_e:
            raise ModelError(
                f"ground truth for {self.task_id} determined before t_e "
                f"({isoformat(self.determined_at)} < {isoformat(task.t_e)})"
            )
        if task.track is Track.NON_RECURRENT and self.method is not TruthMethod.ADJUDICATED_EXPERT_VERIFIED:
            raise ModelError("non-recurrent ground truth requires expert verification")
        return self


# --- timestamp and record helpers -----------------------------------------

def utc(*args, **kwargs) -> datetime:
    return datetime(*args, **kwargs, tzinfo=timezone.utc)


def isoformat(dt: datetime) -> str:
    return dt.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def parse_ts(raw: str) -> datetime:
    dt = datetime.fromisoformat(raw.replace("Z", "+00:00"))
    if dt.tzinfo is None:
        raise ModelError(f"timestamp {raw!r} is not timezone-aware")
    return dt.astimezone(timezone.utc)


def problem_to_record(p: ForecastingProblem) -> dict:
    return {
        "schema": "task/1",
        "id": p.id,
        "question": p.question,
        "t_g": isoformat(p.t_g),
        "t_d": isoformat(p.t_d),
        "t_e": isoformat(p.t_e),
        "track": p.track.value,
        "level": p.level.value,
        "horizon": p.horizon.value,
        "answer_kind": p.answer_kind.value,
        "subject": {k: v for k, v in vars(p.subject).items() if v is not None},
        "period": p.period,
        "week": p.week,
        "state": p.state.value.value,
    }


def problem_from_record(rec: dict, state: TaskState) -> ForecastingProblem:
    sub = rec["subject"]
    return ForecastingProblem(
        id=rec["id"],
        question=rec["question"],
        t_g=parse_ts(rec["t_g"]),
        t_d=parse_ts(rec["t_d"]),
        t_e=parse_ts(rec["t_e"]),
        track=Track(rec["track"]),
        level=Level(rec["level"]),
        horizon=Horizon(rec["horizon"]),
        subject=Subject(**sub),
        answer_kind=AnswerKind(rec["answer_kind"]),
        state=state,
        period=rec.get("period", ""),
        week=rec.get("week", ""),
    )


def answer_to_wire(value: float | Binary | None):
    if isinstance(value, Binary):
        return value.value
    return value


def answer_from_wire(raw, kind: AnswerKind):
    if raw is None:
        return None
    if kind is AnswerKind.BINARY:
        return Binary(raw)
    return float(raw)
