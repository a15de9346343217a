"""Event-driven binary question pipeline with expert review.

Candidates move through three stages, strictly in order:

    Detected  -> signals pulled from the news window (routine scheduled
                 releases excluded)
    Assessed  -> uncertainty scored from source agreement, risk noted
    Drafted   -> binary-answerable question text plus a registry
                 classification (corporate event type, or macro
                 subcategory grounded per economy)

Analyzer stages are ports. The shipped deterministic stub reads structured
signal hints from fixture payloads and scores uncertainty from source
stances, which keeps the full pipeline byte-for-byte reproducible in CI;
a remote-model analyzer can be swapped in behind the same port for
production use, configured in the adapter config file.

Every drafted candidate enters the expert review queue as a task in
UnderReview; only an Approve publishes it. The weekly approval share is
reported against the ~20% selection guideline but never enforced.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace
from datetime import datetime, timedelta, timezone
from typing import Protocol

from .model import (
    AnswerKind,
    Event,
    ForecastingProblem,
    Horizon,
    Level,
    State,
    Subject,
    TaskState,
    Track,
    validate_problem,
)
from .registry import RegistrySet
from .store import AsOfQuery, Datastore, SourceCategory, TimestampedRecord

BENCH_TZ = timezone(timedelta(hours=8))

DATE_RE = re.compile(r"\b(\d{4}-\d{2}-\d{2})\b")


class PipelineError(Exception):
    pass


class StageViolation(PipelineError):
    pass


class Stage(str, enum.Enum):
    DETECTED = "Detected"
    ASSESSED = "Assessed"
    DRAFTED = "Drafted"


STAGE_ORDER = [Stage.DETECTED, Stage.ASSESSED, Stage.DRAFTED]


@dataclass(frozen=True)
class Candidate:
    candidate_id: str
    stage: Stage
    source_record_ids: tuple[str, ...]
    kind: str  # "corporate" | "macro"
    company_id: str | None = None
    event_type_id: int | None = None
    subcategory: str | None = None
    economy: str | None = None
    predicate: str = ""
    cutoff_date: str = ""  # YYYY-MM-DD
    uncertainty: float | None = None
    risk_notes: str = ""
    evidence_record_ids: tuple[str, ...] = ()
    draft_question: str | None = None
    grounding_thresholds: tuple = ()
    task_id: str | None = None

    def advanced(self, to: Stage, **changes) -> "Candidate":
        if STAGE_ORDER.index(to) != STAGE_ORDER.index(self.stage) + 1:
            raise StageViolation(
                f"candidate {self.candidate_id}: cannot move {self.stage.value} -> {to.value}"
            )
        return replace(self, stage=to, **changes)


class AnalyzerPort(Protocol):
    """Pluggable analysis capabilities behind the three pipeline stages."""

    def detect(self, window_records: list[TimestampedRecord]) -> list[dict]: ...

    def assess(self, candidate: Candidate, evidence: list[TimestampedRecord]) -> tuple[float, str]: ...

    def draft(self, candidate: Candidate, evidence: list[TimestampedRecord]) -> dict: ...


class StubAnalyzer:
    """Deterministic analyzer for tests and desk-scale runs.

    detect: emits one signal per news record carrying a structured
    payload["signal"] hint, plus a small keyword fallback.
    assess: 0.5 when sources carry both confirm and deny stances, 0.0 when
    unanimous, 0.25 when no stance hints exist.
    draft: renders the question from the signal's predicate and cutoff.
    """

    KEYWORD_EVENTS = {
        "partnership": 36,  # Strategic Alliances
        "joint venture": 36,
        "acquisition": 44,  # M&A Announcements
        "expansion": 34,    # Business Expansions
        "production facility": 34,
        "buyback": 24,
        "ceo": 1,
    }
    KEYWORD_SUBCATS = {
        "tariff": "C1",
        "export control": "C1",
        "sanction": "I1",
        "rate hike": "A1",
        "rate cut": "A1",
        "stimulus": "B1",
    }

    def detect(self, window_records: list[TimestampedRecord]) -> list[dict]:
        signals = []
        for rec in window_records:
            payload = rec.payload
            if payload.get("scheduled"):
                continue  # routine disclosure, not an event signal
            if "signal" in payload:
                sig = dict(payload["signal"])
                sig["source_record"] = rec.record_id
                signals.append(sig)
                continue
            headline = str(payload.get("headline", "")).lower()
            for kw, event_type in self.KEYWORD_EVENTS.items():
                if kw in headline and payload.get("company"):
                    signals.append({
                        "kind": "corporate",
                        "company": payload["company"],
                        "event_type": event_type,
                        "predicate": payload.get("predicate", f"announce a {kw}"),
                        "cutoff": payload.get("cutoff", ""),
                        "source_record": rec.record_id,
                    })
                    break
            else:
                for kw, subcat in self.KEYWORD_SUBCATS.items():
                    if kw in headline and payload.get("economy"):
                        signals.append({
                            "kind": "macro",
                            "economy": payload["economy"],
                            "subcategory": subcat,
                            "predicate": payload.get("predicate", f"see a {kw} action"),
                            "cutoff": payload.get("cutoff", ""),
                            "source_record": rec.record_id,
                        })
                        break
        return signals

    def assess(self, candidate: Candidate, evidence: list[TimestampedRecord]) -> tuple[float, str]:
        stances = {r.payload.get("stance") for r in evidence}
        stances.discard(None)
        if "confirm" in stances and "deny" in stances:
            return 0.5, "sources disagree on the outcome"
        if len(stances) == 1:
            return 0.0, f"sources unanimous ({next(iter(stances))})"
        return 0.25, "no stance signals in evidence"

    def draft(self, candidate: Candidate, evidence: list[TimestampedRecord]) -> dict:
        return {
            "predicate": candidate.predicate,
            "cutoff": candidate.cutoff_date,
        }


def detect(
    window_start: datetime,
    window_end: datetime,
    store: Datastore,
    analyzer: AnalyzerPort,
    now: datetime | None = None,
) -> list[Candidate]:
    """Scan the closed news window for event candidates.

    Candidates may only cite records published inside the window; the
    postcondition is enforced here regardless of analyzer behaviour.
    Analyzer failures surface as PipelineError; batch callers catch and
    continue.
    """
    if now is not None and window_end > now:
        raise PipelineError("detection window must be closed (end <= now)")
    in_window = [
        r for r in store.query_as_of(AsOfQuery(
            cutoff=window_end,
            source_categories=frozenset({SourceCategory.FINANCIAL_NEWS}),
        ))
        if r.publish_time > window_start
    ]
    try:
        signals = analyzer.detect(in_window)
    except Exception as e:  # surfaced, batch continues
        raise PipelineError(f"analyzer failure in detect: {e}") from e

    window_ids = {r.record_id for r in in_window}
    out = []
    for sig in signals:
        src = sig.get("source_record", "")
        if src not in window_ids:
            # isolation: a candidate may not cite material outside the window
            continue
        out.append(Candidate(
            candidate_id=f"cand:{src}",
            stage=Stage.DETECTED,
            source_record_ids=(src,),
            kind=sig["kind"],
            company_id=sig.get("company"),
            event_type_id=sig.get("event_type"),
            subcategory=sig.get("subcategory"),
            economy=sig.get("economy"),
            predicate=sig.get("predicate", ""),
            cutoff_date=sig.get("cutoff", ""),
        ))
    out.sort(key=lambda c: c.candidate_id)
    return out


def assess(
    candidate: Candidate,
    store: Datastore,
    analyzer: AnalyzerPort,
    now: datetime,
) -> Candidate:
    """Score uncertainty from the evidence available up to now."""
    if candidate.stage is not Stage.DETECTED:
        raise StageViolation(
            f"assess requires stage Detected, candidate {candidate.candidate_id} is {candidate.stage.value}"
        )
    subject_keys = set()
    if candidate.company_id:
        subject_keys.add(candidate.company_id)
    if candidate.economy:
        subject_keys.add(candidate.economy)
    evidence = store.query_as_of(AsOfQuery(cutoff=now, subject_keys=frozenset(subject_keys)))
    evidence_ids = tuple(r.record_id for r in evidence)
    uncertainty, notes = analyzer.assess(candidate, evidence)
    return candidate.advanced(
        Stage.ASSESSED,
        uncertainty=uncertainty,
        risk_notes=notes,
        evidence_record_ids=evidence_ids,
    )


def draft(candidate: Candidate, analyzer: AnalyzerPort, registry: RegistrySet) -> Candidate:
    """Render the binary question and classify against the registry.

    The answerability check is rule-based: the question must name a
    subject, state a falsifiable predicate, and carry a cutoff date.
    """
    if candidate.stage is not Stage.ASSESSED:
        raise StageViolation(
            f"draft requires stage Assessed, candidate {candidate.candidate_id} is {candidate.stage.value}"
        )
    details = analyzer.draft(candidate, [])
    predicate = details.get("predicate", "").strip()
    cutoff = details.get("cutoff", "").strip()

    thresholds = ()
    if candidate.kind == "corporate":
        company = registry.company(candidate.company_id)
        registry.event_type(candidate.event_type_id)
        subject_name = company.name
        question = f"Is it probable that {company.name} will {predicate} by {cutoff}?"
    else:
        economy = registry.economy(candidate.economy)
        rule = registry.grounding_for(candidate.subcategory, candidate.economy)
        thresholds = rule.thresholds
        subject_name = economy.name
        question = f"Will {economy.name} {predicate} by {cutoff}?"

    check_answerable(question, subject_name, predicate, cutoff)
    return candidate.advanced(Stage.DRAFTED, draft_question=question, grounding_thresholds=thresholds)


def check_answerable(question: str, subject: str, predicate: str, cutoff: str) -> None:
    if not subject or subject not in question:
        raise PipelineError("answerability check failed: question names no subject")
    if not predicate:
        raise PipelineError("answerability check failed: no falsifiable event predicate")
    m = DATE_RE.search(cutoff or "")
    if not m or m.group(1) not in question:
        raise PipelineError("answerability check failed: no cutoff date")


def cutoff_to_te(cutoff_date: str) -> datetime:
    """End of the stated cutoff day in the benchmark timezone, as UTC."""
    y, mth, d = (int(x) for x in cutoff_date.split("-"))
    local = datetime(y, mth, d, 23, 59, 59, tzinfo=BENCH_TZ)
    return local.astimezone(timezone.utc)


def horizon_for_cutoff(t_g: datetime, t_e: datetime) -> Horizon:
    days = (t_e - t_g).days
    if days <= 10:
        return Horizon.WEEKLY
    if days <= 45:
        return Horizon.MONTHLY
    return Horizon.QUARTERLY


def problem_from_candidate(
    candidate: Candidate,
    registry: RegistrySet,
    t_g: datetime,
    t_d: datetime,
    week: str,
) -> ForecastingProblem:
    """Build the (still unreviewed) task for a drafted candidate."""
    if candidate.stage is not Stage.DRAFTED:
        raise StageViolation("task creation requires a Drafted candidate")
    t_e = cutoff_to_te(candidate.cutoff_date)
    if candidate.kind == "corporate":
        company = registry.company(candidate.company_id)
        subject = Subject(
            kind="corporate_event",
            company_id=company.identifier,
            event_type_id=candidate.event_type_id,
            economy=company.market,
        )
        tid = f"{week}:nr:corp:{company.identifier}:evt{candidate.event_type_id}:{candidate.cutoff_date}"
        level = Level.CORPORATE
    else:
        subject = Subject(
            kind="macro_event",
            subcategory=candidate.subcategory,
            economy=candidate.economy,
        )
        tid = f"{week}:nr:macro:{candidate.subcategory}:{candidate.economy}:{candidate.cutoff_date}"
        level = Level.MACRO
    problem = ForecastingProblem(
        id=tid,
        question=candidate.draft_question,
        t_g=t_g, t_d=t_d, t_e=t_e,
        track=Track.NON_RECURRENT, level=level,
        horizon=horizon_for_cutoff(t_g, t_e),
        subject=subject, answer_kind=AnswerKind.BINARY,
        state=TaskState(State.DRAFT, t_g),
        period=candidate.cutoff_date, week=week,
    )
    return validate_problem(problem)


class Verdict(str, enum.Enum):
    APPROVE = "Approve"
    REJECT = "Reject"


@dataclass(frozen=True)
class ReviewDecision:
    candidate_id: str
    reviewer_id: str
    verdict: Verdict
    notes: str
    decided_at: datetime


@dataclass
class ReviewQueue:
    """Weekly candidate review: one final decision per candidate."""

    candidates: dict[str, Candidate] = field(default_factory=dict)
    decisions: dict[str, ReviewDecision] = field(default_factory=dict)

    def add(self, candidate: Candidate) -> None:
        if candidate.stage is not Stage.DRAFTED:
            raise StageViolation("only Drafted candidates enter review")
        self.candidates[candidate.candidate_id] = candidate

    def pending(self) -> list[Candidate]:
        return sorted(
            (c for cid, c in self.candidates.items() if cid not in self.decisions),
            key=lambda c: c.candidate_id,
        )

    def decide(self, decision: ReviewDecision) -> Candidate:
        if decision.candidate_id not in self.candidates:
            raise PipelineError(f"unknown candidate: {decision.candidate_id!r}")
        if decision.candidate_id in self.decisions:
            raise PipelineError(f"double decision for candidate {decision.candidate_id!r}")
        self.decisions[decision.candidate_id] = decision
        return self.candidates[decision.candidate_id]

    def approval_report(self) -> dict:
        """Advisory telemetry against the ~20% selection guideline."""
        decided = len(self.decisions)
        approved = sum(1 for d in self.decisions.values() if d.verdict is Verdict.APPROVE)
        rate = (100.0 * approved / decided) if decided else None
        return {
            "drafted": len(self.candidates),
            "decided": decided,
            "approved": approved,
            "approval_rate_pct": rate,
            "guideline_pct": 20.0,
        }


def publish_on_approval(
    problem: ForecastingProblem,
    decision: ReviewDecision,
    submitted_at: datetime,
) -> ForecastingProblem:
    """Drive the task through review per the verdict.

    Draft -> UnderReview at submission; Approve publishes, Reject voids.
    """
    state = problem.state.apply(Event.CANDIDATE_SUBMITTED, submitted_at)
    if decision.verdict is Verdict.APPROVE:
        state = state.apply(Event.EXPERT_APPROVE, decision.decided_at)
    else:
        state = state.apply(Event.EXPERT_REJECT, decision.decided_at)
    return problem.with_state(state)
