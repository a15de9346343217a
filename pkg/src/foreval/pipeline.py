"""Engine: the weekly lifecycle wired through the append-only event log.

Every mutation (task creation, lifecycle transition, prediction, proposal,
ground truth, review decision, score) is an event appended to the
datastore's log; the in-memory projection here is always reconstructable
by replaying that log, which is what the replay command does. Scoring and
leaderboards are pure functions of the projection, so the CLI and the
service produce identical output on the same snapshot.

Single-writer contract: per-task event ordering is serialized by the
engine lock; a resolution cycle additionally holds the cycle lock so only
one cycle runs at a time.
"""
from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from pathlib import Path

from . import nonrecurrent as nr
from . import resolver as rs
from .model import (
    AnswerKind,
    Binary,
    Event,
    ForecastingProblem,
    GroundTruthRecord,
    Prediction,
    State,
    TaskState,
    Track,
    TruthMethod,
    answer_from_wire,
    answer_to_wire,
    isoformat,
    parse_ts,
    problem_from_record,
    problem_to_record,
    transition,
)
from .orchestrator import (
    AdapterLimits,
    EchoAdapter,
    HttpAdapter,
    ParseError,
    ScriptedAdapter,
    WeeklyBatch,
    batch_times,
    build_batch,
    parse_response,
    run_batch,
)
from .registry import RegistrySet, load_registry
from .recurrent import generate_recurrent
from .scoring import Reason, ScoreRecord, aggregate, score, tolerance_for
from .store import Datastore

DETECTION_WINDOW = timedelta(days=7)


class EngineError(Exception):
    pass


@dataclass
class TaskRecord:
    problem: ForecastingProblem
    prediction_by_model: dict[str, Prediction] = field(default_factory=dict)
    truth: GroundTruthRecord | None = None
    proposal: rs.AdjudicationProposal | None = None
    verified: bool = False


class Engine:
    def __init__(
        self,
        data_dir: str | Path | None = None,
        registry: RegistrySet | None = None,
        registry_dir: str | Path | None = None,
    ):
        self.registry = registry or load_registry(registry_dir)
        self.store = Datastore(data_dir)
        self.tasks: dict[str, TaskRecord] = {}
        self.batches: dict[str, WeeklyBatch] = {}
        self.batch_models: dict[str, list[str]] = {}
        self.candidates: dict[str, nr.Candidate] = {}
        self.reviews: dict[str, nr.ReviewDecision] = {}
        self.candidate_task: dict[str, str] = {}
        self._lock = threading.RLock()
        self._cycle_lock = threading.Lock()
        self._rebuild()

    @classmethod
    def from_event_log(cls, log_path: str | Path, registry: RegistrySet | None = None) -> "Engine":
        """Replay an exported event log into a fresh in-memory engine."""
        engine = cls(None, registry=registry)
        engine.store.import_events(log_path)
        engine._rebuild()
        return engine

    # --- projection -----------------------------------------------------------

    def _rebuild(self) -> None:
        for ev in self.store.events():
            self._apply(ev.kind, ev.body)

    def _apply(self, kind: str, body: dict) -> None:
        if kind == "task-created":
            state = TaskState(State(body["state"]), parse_ts(body["t_g"]))
            problem = problem_from_record(body, state)
            self.tasks[problem.id] = TaskRecord(problem=problem)
        elif kind == "transition":
            rec = self.tasks[body["task_id"]]
            rec.problem = rec.problem.with_state(
                transition(rec.problem.state, Event(body["event"]), parse_ts(body["at"]))
            )
        elif kind == "prediction":
            rec = self.tasks[body["task_id"]]
            kind_ = AnswerKind(body["answer_kind"])
            prediction = Prediction(
                task_id=body["task_id"],
                model_id=body["model_id"],
                value=answer_from_wire(body.get("value"), kind_),
                submitted_at=parse_ts(body["submitted_at"]),
                raw_response=body.get("raw_response", ""),
                late=bool(body.get("late")),
                unparsable=bool(body.get("unparsable")),
                isolation_unverified=bool(body.get("isolation_unverified")),
            )
            rec.prediction_by_model.setdefault(prediction.model_id, prediction)
        elif kind == "ground-truth":
            rec = self.tasks[body["task_id"]]
            rec.truth = GroundTruthRecord(
                task_id=body["task_id"],
                value=answer_from_wire(body["value"], AnswerKind(body["value_kind"])),
                determined_at=parse_ts(body["determined_at"]),
                method=TruthMethod(body["method"]),
                evidence_refs=tuple(body.get("evidence_refs", ())),
            )
        elif kind == "proposal":
            rec = self.tasks[body["task_id"]]
            bundle = rs.EvidenceBundle(
                task_id=body["task_id"],
                phase1_official=tuple(body.get("phase1", ())),
                phase2_checks=tuple(body.get("phase2", ())),
                phase3_denials=tuple(body.get("phase3", ())),
                assembled_at=parse_ts(body["assembled_at"]),
            )
            rec.proposal = rs.AdjudicationProposal(
                task_id=body["task_id"],
                proposed=Binary(body["proposed"]),
                basis=rs.Basis(body["basis"]),
                bundle=bundle,
            )
        elif kind == "verification":
            self.tasks[body["task_id"]].verified = True
        elif kind == "batch-built":
            batch = WeeklyBatch(
                batch_id=body["batch_id"],
                t_g=parse_ts(body["t_g"]),
                t_d=parse_ts(body["t_d"]),
                task_ids=tuple(body["task_ids"]),
                task_set_hash=body["task_set_hash"],
            )
            self.batches[batch.batch_id] = batch
        elif kind == "forecast-run":
            models = self.batch_models.setdefault(body["batch_id"], [])
            for m in body["models"]:
                if m not in models:
                    models.append(m)
        elif kind == "candidate-created":
            self.candidates[body["candidate_id"]] = _candidate_from_wire(body)
        elif kind == "candidate-updated":
            self.candidates[body["candidate_id"]] = _candidate_from_wire(body)
            if body.get("task_id"):
                self.candidate_task[body["candidate_id"]] = body["task_id"]
        elif kind == "review-decision":
            decision = nr.ReviewDecision(
                candidate_id=body["candidate_id"],
                reviewer_id=body["reviewer_id"],
                verdict=nr.Verdict(body["verdict"]),
                notes=body.get("notes", ""),
                decided_at=parse_ts(body["decided_at"]),
            )
            self.reviews[decision.candidate_id] = decision
        # "score" and "audit" events carry no projection state

    def _append(self, stream: str, kind: str, at: datetime, body: dict) -> None:
        self.store.append_event(stream, kind, at, body)
        self._apply(kind, body)

    # --- task event helpers ------------------------------------------------------

    def _log_task_created(self, problem: ForecastingProblem) -> None:
        if problem.id in self.tasks:
            raise EngineError(f"task {problem.id} already exists")
        body = problem_to_record(problem)
        body["task_id"] = problem.id
        self._append(f"task:{problem.id}", "task-created", problem.t_g, body)

    def _log_transitions(self, task_id: str, before: int, state: TaskState) -> None:
        for entry in state.history[before:]:
            self._append(
                f"task:{task_id}", "transition", entry.at,
                {"task_id": task_id, "event": entry.event.value, "at": isoformat(entry.at)},
            )

    # --- generation ---------------------------------------------------------------

    def generate(
        self,
        week: str,
        seed: int = 0,
        reviews: dict[str, dict] | None = None,
        analyzer: nr.AnalyzerPort | None = None,
    ) -> dict:
        """Generate the week's batch: recurrent directly to Published,
        non-recurrent through the review queue (decisions from `reviews`,
        keyed by candidate id). Deterministic given the same store, seed,
        and decisions: all event times derive from the batch clock."""
        with self._lock:
            if week in self.batches:
                raise EngineError(f"batch {week} already built (batches are immutable)")
            t_g, t_d = batch_times(week)
            analyzer = analyzer or nr.StubAnalyzer()
            reviews = reviews or {}

            problems = generate_recurrent(week, t_g, t_d, self.registry, self.store, seed=seed)
            for p in problems:
                self._log_task_created(p)

            queue = nr.ReviewQueue()
            errors: list[str] = []
            try:
                detected = nr.detect(t_g - DETECTION_WINDOW, t_g, self.store, analyzer, now=t_g)
            except nr.PipelineError as e:
                detected = []
                errors.append(str(e))
            for cand in detected:
                self._append(
                    f"candidate:{cand.candidate_id}", "candidate-created", t_g,
                    _candidate_to_wire(cand),
                )
                try:
                    cand = nr.assess(cand, self.store, analyzer, t_g)
                    cand = nr.draft(cand, analyzer, self.registry)
                except Exception as e:  # per-candidate failure, batch continues
                    errors.append(f"{cand.candidate_id}: {e}")
                    continue
                problem = nr.problem_from_candidate(cand, self.registry, t_g, t_d, week)
                cand = nr.Candidate(**{**vars(cand), "task_id": problem.id})
                self._log_task_created(problem)
                self._append(
                    f"candidate:{cand.candidate_id}", "candidate-updated", t_g,
                    _candidate_to_wire(cand),
                )
                queue.add(cand)

            submitted_at = t_g + timedelta(minutes=1)
            published: list[ForecastingProblem] = list(problems)
            for cand in queue.pending():
                entry = reviews.get(cand.candidate_id)
                if entry is None:
                    continue  # stays in the queue for the service
                decision = nr.ReviewDecision(
                    candidate_id=cand.candidate_id,
                    reviewer_id=entry.get("reviewer_id", "expert"),
                    verdict=nr.Verdict(entry["verdict"]),
                    notes=entry.get("notes", ""),
                    decided_at=parse_ts(entry["decided_at"]) if entry.get("decided_at") else t_g + timedelta(hours=2),
                )
                published_task = self.submit_review(decision, submitted_at=submitted_at)
                if published_task.state.value is State.PUBLISHED:
                    published.append(published_task)
            # tasks still awaiting review go to the service queue; only tasks
            # published for this deadline enter the batch
            batch = build_batch(week, [p for p in published if p.t_d == t_d])
            self._append(f"batch:{week}", "batch-built", t_g, batch.to_wire())
            report = self.approval_report(week)
            self._append(f"batch:{week}", "audit", t_g, {"kind": "approval-report", **report})
            return {
                "week": week,
                "tasks": len(batch.task_ids),
                "recurrent": len(problems),
                "nonrecurrent_published": len(batch.task_ids) - len(problems),
                "candidates": len(detected),
                "approval_report": report,
                "errors": errors,
            }

    def review_queue(self, week: str | None = None) -> list[nr.Candidate]:
        out = []
        for cid, cand in sorted(self.candidates.items()):
            if cand.stage is not nr.Stage.DRAFTED or cid in self.reviews:
                continue
            if week and cand.task_id and not cand.task_id.startswith(week):
                continue
            out.append(cand)
        return out

    def submit_review(self, decision: nr.ReviewDecision, submitted_at: datetime | None = None) -> ForecastingProblem:
        with self._lock:
            cand = self.candidates.get(decision.candidate_id)
            if cand is None:
                raise EngineError(f"unknown candidate: {decision.candidate_id!r}")
            if decision.candidate_id in self.reviews:
                raise EngineError(f"double decision for candidate {decision.candidate_id!r}")
            task_id = cand.task_id or self.candidate_task.get(decision.candidate_id)
            if task_id is None:
                raise EngineError(f"candidate {decision.candidate_id!r} has no drafted task")
            rec = self.tasks[task_id]
            before = len(rec.problem.state.history)
            submitted = submitted_at or rec.problem.t_g + timedelta(minutes=1)
            updated = nr.publish_on_approval(rec.problem, decision, submitted)
            self._append(
                f"candidate:{decision.candidate_id}", "review-decision", decision.decided_at,
                {
                    "candidate_id": decision.candidate_id,
                    "reviewer_id": decision.reviewer_id,
                    "verdict": decision.verdict.value,
                    "notes": decision.notes,
                    "decided_at": isoformat(decision.decided_at),
                    "task_id": task_id,
                },
            )
            self._log_transitions(task_id, before, updated.state)
            return self.tasks[task_id].problem

    def approval_report(self, week: str | None = None) -> dict:
        queue = nr.ReviewQueue()
        for cid, cand in self.candidates.items():
            if cand.stage is nr.Stage.DRAFTED and (not week or (cand.task_id or "").startswith(week)):
                queue.add(cand)
        for cid, decision in self.reviews.items():
            if cid in queue.candidates:
                queue.decisions[cid] = decision
        return queue.approval_report()

    # --- forecasting -----------------------------------------------------------------

    def forecast(
        self,
        batch_id: str,
        adapters: list,
        as_of: datetime | None = None,
    ) -> dict:
        with self._lock:
            batch = self.batches.get(batch_id)
            if batch is None:
                raise EngineError(f"unknown batch: {batch_id!r}")
            # batch immutability: the recorded member set must still hash the same
            digest = hashlib.sha256("\n".join(sorted(batch.task_ids)).encode()).hexdigest()
            if digest != batch.task_set_hash:
                raise EngineError(f"batch {batch_id} task set changed after build")
            now_fn = (lambda: as_of) if as_of else (lambda: datetime.now(timezone.utc))
            tasks = {tid: self.tasks[tid].problem for tid in batch.task_ids}
            outcomes = run_batch(batch, tasks, adapters, self.registry, now_fn)
            accepted = 0
            for out in outcomes:
                rec = self.tasks[out.task_id]
                if out.model_id in rec.prediction_by_model:
                    continue  # at most one accepted response per task x model
                if out.failed and not out.raw_text:
                    if out.late:
                        pass  # post-deadline completion: recorded below, excluded from scoring
                    else:
                        self._append(
                            f"task:{out.task_id}", "audit", out.received_at,
                            {"kind": "invocation-failed", "task_id": out.task_id,
                             "model_id": out.model_id, "error": out.error, "retries": out.retries},
                        )
                        continue
                value = None
                unparsable = False
                if not out.failed:
                    try:
                        value = parse_response(out.raw_text, rec.problem.answer_kind)
                    except ParseError:
                        unparsable = True
                else:
                    unparsable = True
                body = {
                    "task_id": out.task_id,
                    "model_id": out.model_id,
                    "answer_kind": rec.problem.answer_kind.value,
                    "value": answer_to_wire(value),
                    "submitted_at": isoformat(out.received_at),
                    "raw_response": out.raw_text,
                    "late": out.late,
                    "unparsable": unparsable,
                    "isolation_unverified": out.isolation_unverified,
                    "retries": out.retries,
                }
                self._append(f"task:{out.task_id}", "prediction", out.received_at, body)
                accepted += 1
            self._append(
                f"batch:{batch_id}", "forecast-run", now_fn(),
                {"batch_id": batch_id, "models": [a.model_id for a in adapters]},
            )
            return {"batch": batch_id, "invocations": len(outcomes), "recorded": accepted}

    # --- resolution ----------------------------------------------------------------

    def resolve(self, as_of: datetime, verifier: rs.VerifierPort | None = None) -> list[rs.CycleOutcome]:
        """One resolution cycle at the given instant (single cycle at a time)."""
        with self._cycle_lock, self._lock:
            problems = {tid: rec.problem for tid, rec in self.tasks.items()}
            before = {tid: len(p.state.history) for tid, p in problems.items()}
            verified = {tid for tid, rec in self.tasks.items() if rec.verified}
            outcomes = rs.resolution_cycle(
                as_of, problems, self.store, self.registry, verifier, verified,
            )
            for tid, problem in problems.items():
                self._log_transitions(tid, before[tid], problem.state)
            for outcome in outcomes:
                if outcome.proposal is not None:
                    self._append(
                        f"task:{outcome.task_id}", "proposal", as_of,
                        _proposal_to_wire(outcome.proposal),
                    )
                if outcome.verification is not None:
                    self._append(
                        f"task:{outcome.task_id}", "verification", as_of,
                        {
                            "task_id": outcome.task_id,
                            "verifier_id": outcome.verification.verifier_id,
                            "verdict": outcome.verification.verdict.value,
                            "reason": outcome.verification.reason,
                            "verified_at": isoformat(outcome.verification.verified_at),
                        },
                    )
                if outcome.truth is not None:
                    self._append(
                        f"task:{outcome.task_id}", "ground-truth", outcome.truth.determined_at,
                        _truth_to_wire(outcome.truth),
                    )
                for flag in outcome.flags:
                    self._append(
                        f"task:{outcome.task_id}", "audit", as_of,
                        {"kind": "resolution-flag", "task_id": outcome.task_id, "flag": flag},
                    )
            return outcomes

    def pending_proposals(self) -> list[rs.AdjudicationProposal]:
        out = []
        for tid, rec in sorted(self.tasks.items()):
            if rec.proposal is not None and not rec.verified and rec.problem.state.value in (
                State.PENDING, State.AWAITING_RESOLUTION,
            ):
                out.append(rec.proposal)
        return out

    def verify_proposal(self, task_id: str, decision: rs.ExpertVerification) -> GroundTruthRecord:
        with self._lock:
            rec = self.tasks.get(task_id)
            if rec is None:
                raise EngineError(f"unknown task: {task_id!r}")
            if rec.proposal is None:
                raise EngineError(f"task {task_id} has no adjudication proposal")
            truth = rs.verify(rec.proposal, decision, rec.problem, already_verified=rec.verified)
            before = len(rec.problem.state.history)
            updated = rec.problem.with_state(
                rec.problem.state.apply(Event.GROUND_TRUTH_RECORDED, decision.verified_at)
            )
            self._append(
                f"task:{task_id}", "verification", decision.verified_at,
                {
                    "task_id": task_id,
                    "verifier_id": decision.verifier_id,
                    "verdict": decision.verdict.value,
                    "reason": decision.reason,
                    "verified_at": isoformat(decision.verified_at),
                },
            )
            self._log_transitions(task_id, before, updated.state)
            self._append(
                f"task:{task_id}", "ground-truth", truth.determined_at, _truth_to_wire(truth),
            )
            return truth

    # --- scoring -----------------------------------------------------------------------

    def due_models(self, week: str | None = None) -> list[str]:
        models: list[str] = []
        for batch_id, batch_models in sorted(self.batch_models.items()):
            if week and batch_id != week:
                continue
            for m in batch_models:
                if m not in models:
                    models.append(m)
        return models

    def score_records(self, week: str | None = None, log: bool = False) -> list[ScoreRecord]:
        """Score every Resolved, non-void task against every due model.

        A due (task, model) pair with no accepted prediction scores 0 with
        reason NoPrediction so leaderboards share a denominator.
        """
        records: list[ScoreRecord] = []
        for batch_id, batch in sorted(self.batches.items()):
            if week and batch_id != week:
                continue
            models = self.batch_models.get(batch_id, [])
            for tid in batch.task_ids:
                rec = self.tasks[tid]
                if rec.problem.state.value is not State.RESOLVED or rec.truth is None:
                    continue
                epsilon = (
                    tolerance_for(rec.problem, self.registry)
                    if rec.problem.track is Track.RECURRENT else None
                )
                for model in models:
                    prediction = rec.prediction_by_model.get(model)
                    sr = score(rec.problem, prediction, rec.truth.value, epsilon=epsilon)
                    if prediction is None:
                        sr = ScoreRecord(**{**vars(sr), "model_id": model})
                    records.append(sr)
                    if log:
                        self._append(f"task:{tid}", "score", rec.truth.determined_at, sr.to_wire())
        return records

    def leaderboard(self, grouping: list[str], week: str | None = None) -> list:
        return aggregate(self.score_records(week=week), grouping)

    # --- misc ------------------------------------------------------------------------

    def tasks_by(self, state: str | None = None, week: str | None = None, market: str | None = None):
        out = []
        for tid, rec in sorted(self.tasks.items()):
            p = rec.problem
            if state and p.state.value.value != state:
                continue
            if week and p.week != week:
                continue
            if market and p.market != market:
                continue
            out.append(p)
        return out

    def close(self) -> None:
        self.store.close()


# --- adapters from config ------------------------------------------------------------

def adapters_from_config(config: dict, base_dir: Path | None = None, models: list[str] | None = None) -> list:
    """Instantiate adapters from the declarative adapter config."""
    out = []
    for entry in config.get("adapters", []):
        model_id = entry["model_id"]
        if models is not None and model_id not in models:
            continue
        limits = AdapterLimits(**entry.get("limits", {}))
        kind = entry.get("kind", "scripted")
        cutoff_support = bool(entry.get("cutoff_support", True))
        if kind == "scripted":
            script: dict[str, dict] = {}
            script_path = entry.get("script")
            if script_path:
                path = Path(script_path)
                if base_dir and not path.is_absolute():
                    path = base_dir / path
                for line in path.read_text(encoding="utf-8").splitlines():
                    if not line.strip():
                        continue
                    row = json.loads(line)
                    if row.get("model_id") in (None, model_id):
                        script[row["task_id"]] = row
            out.append(ScriptedAdapter(
                model_id=model_id, script=script, cutoff_support=cutoff_support, limits=limits,
            ))
        elif kind == "echo":
            out.append(EchoAdapter(
                model_id=model_id, text=entry.get("text", ""), cutoff_support=cutoff_support,
                limits=limits,
            ))
        elif kind == "http":
            out.append(HttpAdapter(
                model_id=model_id,
                endpoint=entry["endpoint"],
                credential_env=entry.get("credential_env", ""),
                params=entry.get("params", {}),
                cutoff_support=cutoff_support,
                limits=limits,
                timeout_s=float(entry.get("timeout_s", 60.0)),
            ))
        else:
            raise EngineError(f"unknown adapter kind {kind!r}")
    if models is not None:
        known = {a.model_id for a in out}
        missing = [m for m in models if m not in known]
        if missing:
            raise EngineError(f"no adapter configured for: {', '.join(missing)}")
    return out


# --- wire helpers ---------------------------------------------------------------------

def _candidate_to_wire(c: nr.Candidate) -> dict:
    return {
        "schema": "candidate/1",
        "candidate_id": c.candidate_id,
        "stage": c.stage.value,
        "source_record_ids": list(c.source_record_ids),
        "kind": c.kind,
        "company_id": c.company_id,
        "event_type_id": c.event_type_id,
        "subcategory": c.subcategory,
        "economy": c.economy,
        "predicate": c.predicate,
        "cutoff_date": c.cutoff_date,
        "uncertainty": c.uncertainty,
        "risk_notes": c.risk_notes,
        "evidence_record_ids": list(c.evidence_record_ids),
        "draft_question": c.draft_question,
        "task_id": c.task_id,
    }


def _candidate_from_wire(body: dict) -> nr.Candidate:
    return nr.Candidate(
        candidate_id=body["candidate_id"],
        stage=nr.Stage(body["stage"]),
        source_record_ids=tuple(body.get("source_record_ids", ())),
        kind=body["kind"],
        company_id=body.get("company_id"),
        event_type_id=body.get("event_type_id"),
        subcategory=body.get("subcategory"),
        economy=body.get("economy"),
        predicate=body.get("predicate", ""),
        cutoff_date=body.get("cutoff_date", ""),
        uncertainty=body.get("uncertainty"),
        risk_notes=body.get("risk_notes", ""),
        evidence_record_ids=tuple(body.get("evidence_record_ids", ())),
        draft_question=body.get("draft_question"),
        task_id=body.get("task_id"),
    )


def _proposal_to_wire(p: rs.AdjudicationProposal) -> dict:
    return {
        "schema": "proposal/1",
        "task_id": p.task_id,
        "proposed": p.proposed.value,
        "basis": p.basis.value,
        "phase1": list(p.bundle.phase1_official),
        "phase2": list(p.bundle.phase2_checks),
        "phase3": list(p.bundle.phase3_denials),
        "assembled_at": isoformat(p.bundle.assembled_at),
    }


def _truth_to_wire(t: GroundTruthRecord) -> dict:
    return {
        "schema": "truth/1",
        "task_id": t.task_id,
        "value": answer_to_wire(t.value),
        "value_kind": AnswerKind.BINARY.value if isinstance(t.value, Binary) else AnswerKind.NUMERIC.value,
        "determined_at": isoformat(t.determined_at),
        "method": t.method.value,
        "evidence_refs": list(t.evidence_refs),
    }
