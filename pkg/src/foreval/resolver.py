"""Rolling resolution: official extraction, adjudication, verification.

Every Monday the cycle picks up tasks whose evaluation time has passed.
Recurrent values come out of the matching filing or release record
(derived ratios are computed from component fields per the registry
formula). Non-recurrent outcomes run the three-phase evidence protocol:

    phase 1  official sources and major financial news for the subject
    phase 2  numeric checks against the grounding rule's stored thresholds
    phase 3  denial / contradiction scan

The adjudicator proposes YES only on authoritative confirmation with no
standing denial; ambiguity or absence of evidence proposes NO. Every
non-recurrent ground truth then requires exactly one expert verification
(Confirm or Override) before the task resolves.

Tasks that cannot be concluded go Pending and are revisited weekly; a
task still unresolved strictly more than 14 days past its evaluation time
is voided and excluded from evaluation. Within a cycle the resolution
attempt runs before the void check, so a value that finally lands on the
last permitted cycle still counts. Re-running a completed cycle changes
nothing: resolved and void tasks are terminal, and an official
restatement after resolution never rewrites the extracted value (it stays
in the record store for audit only).
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from datetime import datetime
from typing import Protocol

from .model import (
    Binary,
    Event,
    ForecastingProblem,
    GroundTruthRecord,
    Level,
    ModelError,
    State,
    Track,
    TruthMethod,
    void_eligible,
)
from .registry import CorporateMetricSpec, RegistrySet
from .store import AsOfQuery, Datastore, SourceCategory, TimestampedRecord

OFFICIAL_CATEGORIES = {SourceCategory.GOVERNMENT_RELEASE, SourceCategory.CORPORATE_FILING}


class ResolverError(Exception):
    pass


class DoubleVerification(ResolverError):
    pass


@dataclass(frozen=True)
class EvidenceBundle:
    task_id: str
    phase1_official: tuple[str, ...]  # record ids
    phase2_checks: tuple[dict, ...]   # threshold check results
    phase3_denials: tuple[str, ...]   # record ids
    assembled_at: datetime


class Basis(str, enum.Enum):
    CONFIRMED_BY_AUTHORITATIVE = "ConfirmedByAuthoritative"
    AMBIGUOUS_OR_ABSENT = "AmbiguousOrAbsent"


@dataclass(frozen=True)
class AdjudicationProposal:
    task_id: str
    proposed: Binary
    basis: Basis
    bundle: EvidenceBundle

    def __post_init__(self):
        if self.proposed is Binary.YES and self.basis is not Basis.CONFIRMED_BY_AUTHORITATIVE:
            raise ResolverError("a YES proposal requires authoritative confirmation")


class VerificationVerdict(str, enum.Enum):
    CONFIRM = "Confirm"
    OVERRIDE = "Override"


@dataclass(frozen=True)
class ExpertVerification:
    task_id: str
    verifier_id: str
    verdict: VerificationVerdict
    verified_at: datetime
    override_value: Binary | None = None
    reason: str = ""


class VerifierPort(Protocol):
    """Source of expert verifications during a cycle (scripted in replay,
    the review service in production)."""

    def verification_for(self, task_id: str, now: datetime) -> ExpertVerification | None: ...


class NoVerifier:
    def verification_for(self, task_id: str, now: datetime) -> ExpertVerification | None:
        return None


@dataclass
class ScriptedVerifier:
    """Replay verifier: decisions keyed by task id."""

    decisions: dict[str, dict]

    def verification_for(self, task_id: str, now: datetime) -> ExpertVerification | None:
        entry = self.decisions.get(task_id)
        if entry is None:
            return None
        verdict = VerificationVerdict(entry.get("verdict", "Confirm"))
        override = entry.get("value")
        return ExpertVerification(
            task_id=task_id,
            verifier_id=entry.get("verifier_id", "expert"),
            verdict=verdict,
            verified_at=now,
            override_value=Binary(override) if override else None,
            reason=entry.get("reason", ""),
        )


# --- recurrent extraction -----------------------------------------------------

@dataclass(frozen=True)
class Extraction:
    value: float | None
    evidence: tuple[str, ...] = ()
    flags: tuple[str, ...] = ()


_TOKEN_RE = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*|\d+(?:\.\d+)?|[()+\-*/])")


def eval_formula(formula: str, values: dict[str, float]) -> float | None:
    """Evaluate a registry derivation over reported value fields.

    Grammar: identifiers, numbers, + - * /, parentheses. Returns None when
    any referenced field is missing (the metric is then simply not
    extractable from this record).
    """
    tokens = []
    pos = 0
    while pos < len(formula):
        m = _TOKEN_RE.match(formula, pos)
        if not m:
            raise ResolverError(f"bad derivation formula {formula!r} at offset {pos}")
        tokens.append(m.group(1))
        pos = m.end()
    it = iter(tokens)
    current = [next(it, None)]

    def peek():
        return current[0]

    def advance():
        tok = current[0]
        current[0] = next(it, None)
        return tok

    missing: list[str] = []

    def parse_expr():
        value = parse_term()
        while peek() in ("+", "-"):
            op = advance()
            rhs = parse_term()
            if value is None or rhs is None:
                value = None
            else:
                value = value + rhs if op == "+" else value - rhs
        return value

    def parse_term():
        value = parse_atom()
        while peek() in ("*", "/"):
            op = advance()
            rhs = parse_atom()
            if value is None or rhs is None:
                value = None
            elif op == "*":
                value = value * rhs
            else:
                if rhs == 0:
                    raise ResolverError(f"division by zero in {formula!r}")
                value = value / rhs
        return value

    def parse_atom():
        tok = advance()
        if tok == "(":
            value = parse_expr()
            if advance() != ")":
                raise ResolverError(f"unbalanced parentheses in {formula!r}")
            return value
        if tok is None:
            raise ResolverError(f"truncated formula {formula!r}")
        if re.fullmatch(r"\d+(?:\.\d+)?", tok):
            return float(tok)
        if tok in values:
            return float(values[tok])
        missing.append(tok)
        return None

    result = parse_expr()
    if peek() is not None:
        raise ResolverError(f"trailing tokens in formula {formula!r}")
    return None if missing else result


def metric_value(spec: CorporateMetricSpec, values: dict[str, float]) -> float | None:
    """Reported value if present, else the registry derivation."""
    direct = values.get(spec.value_key)
    if direct is not None:
        return float(direct)
    if spec.derivation:
        return eval_formula(spec.derivation, values)
    return None


def extract_recurrent(
    task: ForecastingProblem,
    store: Datastore,
    registry: RegistrySet,
    as_of: datetime,
) -> Extraction:
    """Official value for a recurrent task from records up to as_of.

    Conflicting same-period records resolve to the latest publish time and
    carry an expert flag.
    """
    if task.track is not Track.RECURRENT:
        raise ResolverError(f"extract_recurrent on non-recurrent task {task.id}")
    flags: list[str] = []
    if task.level is Level.CORPORATE:
        spec = registry.metric(task.subject.metric_id)
        records = store.query_as_of(AsOfQuery(
            cutoff=as_of,
            subject_keys=frozenset({task.subject.company_id}),
            source_categories=frozenset({SourceCategory.CORPORATE_FILING}),
        ))
        matches = []
        for rec in records:
            if rec.payload.get("scheduled"):
                continue
            if rec.payload.get("period") != task.period:
                continue
            value = metric_value(spec, rec.payload.get("values", {}))
            if value is not None:
                matches.append((rec, value))
    else:
        records = store.query_as_of(AsOfQuery(
            cutoff=as_of,
            subject_keys=frozenset({task.subject.indicator_id}),
            source_categories=frozenset({SourceCategory.GOVERNMENT_RELEASE, SourceCategory.MARKET_DATA}),
        ))
        matches = []
        for rec in records:
            if rec.payload.get("scheduled"):
                continue
            if rec.payload.get("period") != task.period:
                continue
            if rec.payload.get("value") is None:
                continue
            matches.append((rec, float(rec.payload["value"])))

    if not matches:
        return Extraction(value=None)
    values = {v for _, v in matches}
    if len(values) > 1:
        flags.append("conflicting-records: latest publish time used, flagged for expert review")
    rec, value = matches[-1]  # query order is publish-time ascending
    return Extraction(value=value, evidence=(rec.record_id,), flags=tuple(flags))


# --- non-recurrent evidence and adjudication -------------------------------------

def assemble_evidence(
    task: ForecastingProblem,
    store: Datastore,
    registry: RegistrySet,
    now: datetime,
) -> EvidenceBundle:
    """Run the three phases over records published up to assembly time."""
    if task.track is not Track.NON_RECURRENT:
        raise ResolverError(f"evidence protocol is for non-recurrent tasks, got {task.id}")
    subject_keys = set(task.subject.subject_keys())
    records = store.query_as_of(AsOfQuery(cutoff=now, subject_keys=frozenset(subject_keys)))
    relevant = [r for r in records if _about_task(task, r)]

    phase1 = tuple(
        r.record_id for r in relevant
        if r.source_category in OFFICIAL_CATEGORIES
        or r.payload.get("authoritative")
    )
    phase2: list[dict] = []
    if task.subject.kind == "macro_event":
        rule = registry.grounding_for(task.subject.subcategory, task.subject.economy)
        observations: dict[str, float] = {}
        for r in relevant:
            for quantity, observed in (r.payload.get("observations") or {}).items():
                observations[quantity] = float(observed)
        for threshold in rule.thresholds:
            observed = observations.get(threshold.quantity)
            phase2.append({
                "quantity": threshold.quantity,
                "comparator": threshold.comparator,
                "required": threshold.value,
                "observed": observed,
                "satisfied": bool(observed is not None and threshold.satisfied_by(observed)),
            })
    phase3 = tuple(
        r.record_id for r in relevant
        if r.payload.get("stance") == "deny"
        and (r.source_category in OFFICIAL_CATEGORIES or r.payload.get("authoritative"))
    )
    return EvidenceBundle(
        task_id=task.id,
        phase1_official=phase1,
        phase2_checks=tuple(phase2),
        phase3_denials=phase3,
        assembled_at=now,
    )


def _about_task(task: ForecastingProblem, rec: TimestampedRecord) -> bool:
    payload = rec.payload
    if payload.get("scheduled"):
        return False
    if task.subject.kind == "corporate_event":
        return (
            payload.get("company") == task.subject.company_id
            and payload.get("event_type") == task.subject.event_type_id
        )
    return (
        payload.get("economy") == task.subject.economy
        and payload.get("subcategory") == task.subject.subcategory
    )


def adjudicate_nonrecurrent(task: ForecastingProblem, bundle: EvidenceBundle, store: Datastore) -> AdjudicationProposal:
    """YES only on authoritative confirmation with no standing denial.

    Confirmation means an official/authoritative record with a confirm
    stance (phase 1) or a satisfied grounding threshold (phase 2).
    Ambiguity or absence of evidence proposes NO, and a denial dominates
    any confirmation.
    """
    confirmed = any(
        store.record(rid).payload.get("stance") == "confirm"
        for rid in bundle.phase1_official
    ) or any(check["satisfied"] for check in bundle.phase2_checks)
    denied = len(bundle.phase3_denials) > 0
    if confirmed and not denied:
        return AdjudicationProposal(task.id, Binary.YES, Basis.CONFIRMED_BY_AUTHORITATIVE, bundle)
    return AdjudicationProposal(task.id, Binary.NO, Basis.AMBIGUOUS_OR_ABSENT, bundle)


def verify(
    proposal: AdjudicationProposal,
    decision: ExpertVerification,
    task: ForecastingProblem,
    already_verified: bool = False,
) -> GroundTruthRecord:
    """Apply the mandatory expert verification to a proposal."""
    if already_verified:
        raise DoubleVerification(f"task {proposal.task_id} already has a verification")
    if decision.verdict is VerificationVerdict.OVERRIDE:
        if decision.override_value is None:
            raise ResolverError("Override verification requires a replacement value")
        value = decision.override_value
    else:
        value = proposal.proposed
    truth = GroundTruthRecord(
        task_id=proposal.task_id,
        value=value,
        determined_at=decision.verified_at,
        method=TruthMethod.ADJUDICATED_EXPERT_VERIFIED,
        evidence_refs=proposal.bundle.phase1_official + proposal.bundle.phase3_denials,
    )
    return truth.validate(task)


# --- the cycle --------------------------------------------------------------------

@dataclass(frozen=True)
class CycleOutcome:
    task_id: str
    outcome: str  # Resolved | Pending | Void
    updated: ForecastingProblem
    truth: GroundTruthRecord | None = None
    proposal: AdjudicationProposal | None = None
    verification: ExpertVerification | None = None
    flags: tuple[str, ...] = ()


def resolution_cycle(
    now: datetime,
    tasks: dict[str, ForecastingProblem],
    store: Datastore,
    registry: RegistrySet,
    verifier: VerifierPort | None = None,
    verified_tasks: set[str] | None = None,
) -> list[CycleOutcome]:
    """Attempt every due task once; per-task failures become Pending.

    Deadline passage is applied first (Published -> AwaitingResolution for
    tasks past t_d), then each AwaitingResolution/Pending task with
    t_e < now is attempted.
    """
    verifier = verifier or NoVerifier()
    verified_tasks = verified_tasks or set()
    outcomes: list[CycleOutcome] = []

    for tid in sorted(tasks):
        task = tasks[tid]
        state = task.state
        if state.value is State.PUBLISHED and task.t_d < now:
            state = state.apply(Event.DEADLINE_PASSED, task.t_d)
            task = task.with_state(state)
            tasks[tid] = task
        if state.value not in (State.AWAITING_RESOLUTION, State.PENDING):
            continue
        if task.t_e >= now:
            continue

        try:
            outcome = _attempt(task, now, store, registry, verifier, tid in verified_tasks)
        except ModelError as e:
            outcome = _to_pending(task, now, flag=f"resolution error: {e}")
        tasks[tid] = outcome.updated
        outcomes.append(outcome)
    return outcomes


def _attempt(
    task: ForecastingProblem,
    now: datetime,
    store: Datastore,
    registry: RegistrySet,
    verifier: VerifierPort,
    already_verified: bool,
) -> CycleOutcome:
    if task.track is Track.RECURRENT:
        extraction = extract_recurrent(task, store, registry, now)
        if extraction.value is not None:
            truth = GroundTruthRecord(
                task_id=task.id,
                value=extraction.value,
                determined_at=now,
                method=TruthMethod.OFFICIAL_EXTRACT,
                evidence_refs=extraction.evidence,
            ).validate(task)
            updated = task.with_state(task.state.apply(Event.GROUND_TRUTH_RECORDED, now))
            return CycleOutcome(task.id, "Resolved", updated, truth=truth, flags=extraction.flags)
        return _maybe_void_or_pending(task, now)

    bundle = assemble_evidence(task, store, registry, now)
    proposal = adjudicate_nonrecurrent(task, bundle, store)
    decision = verifier.verification_for(task.id, now)
    if decision is not None:
        truth = verify(proposal, decision, task, already_verified=already_verified)
        updated = task.with_state(task.state.apply(Event.GROUND_TRUTH_RECORDED, now))
        return CycleOutcome(
            task.id, "Resolved", updated, truth=truth, proposal=proposal, verification=decision,
        )
    return _maybe_void_or_pending(task, now, proposal=proposal)


def _maybe_void_or_pending(
    task: ForecastingProblem,
    now: datetime,
    proposal: AdjudicationProposal | None = None,
) -> CycleOutcome:
    if task.state.value is State.PENDING and void_eligible(task, now):
        updated = task.with_state(task.state.apply(Event.VALIDITY_EXPIRED, now))
        return CycleOutcome(task.id, "Void", updated, proposal=proposal)
    return _to_pending(task, now, proposal=proposal)


def _to_pending(
    task: ForecastingProblem,
    now: datetime,
    proposal: AdjudicationProposal | None = None,
    flag: str = "",
) -> CycleOutcome:
    flags = (flag,) if flag else ()
    if task.state.value is State.AWAITING_RESOLUTION:
        updated = task.with_state(task.state.apply(Event.RESOLUTION_FAILED, now))
    else:
        updated = task  # already Pending; revisit next cycle
    return CycleOutcome(task.id, "Pending", updated, proposal=proposal, flags=flags)
