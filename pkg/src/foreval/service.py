"""HTTP service: tasks, review, adjudication, predictions, leaderboards.

Roles are static bearer tokens from the config file (Admin, Expert,
Reader); review and verification endpoints require Expert or Admin. Every
mutating endpoint writes through the engine's event log, so API activity
is replayable like everything else. GET endpoints are side-effect free,
and leaderboard responses are computed by the same function the CLI uses,
making the two byte-identical on a snapshot.
"""
from __future__ import annotations

from datetime import datetime, timezone

from fastapi import Depends, FastAPI, HTTPException, Query, Request
from pydantic import BaseModel, Field

from . import nonrecurrent as nr
from . import resolver as rs
from .model import Binary, isoformat, parse_ts
from .pipeline import Engine, EngineError
from .reporting import leaderboard_lines
from .scoring import GROUPING_KEYS, ScoringError
from .store import DuplicateRecord, StoreError, TimestampedRecord

SCHEMA_VERSION = "api/1"


class ReviewBody(BaseModel):
    verdict: str = Field(pattern="^(Approve|Reject)$")
    reviewer_id: str = "expert"
    notes: str = ""
    decided_at: str | None = None


class VerifyBody(BaseModel):
    verdict: str = Field(pattern="^(Confirm|Override)$")
    value: str | None = Field(default=None, pattern="^(YES|NO)$")
    verifier_id: str = "expert"
    reason: str = ""
    verified_at: str | None = None


class IngestBody(BaseModel):
    record_id: str
    source_category: str
    publish_time: str
    subject_keys: list[str] = []
    payload: dict = {}


def create_app(engine: Engine, tokens: dict[str, str] | None = None) -> FastAPI:
    app = FastAPI(title="foreval", version=SCHEMA_VERSION)
    tokens = tokens or {}

    def role_of(request: Request) -> str:
        header = request.headers.get("authorization", "")
        if not header.lower().startswith("bearer "):
            raise HTTPException(status_code=401, detail="missing bearer token")
        token = header.split(None, 1)[1].strip()
        role = tokens.get(token)
        if role is None:
            raise HTTPException(status_code=401, detail="unknown token")
        return role

    def require(*allowed: str):
        def check(request: Request) -> str:
            role = role_of(request)
            if role not in allowed:
                raise HTTPException(status_code=403, detail=f"requires one of: {', '.join(allowed)}")
            return role
        return check

    reader = require("Reader", "Expert", "Admin")
    expert = require("Expert", "Admin")
    admin = require("Admin")

    @app.get("/health")
    def health():
        return {
            "schema": SCHEMA_VERSION,
            "status": "ok",
            "registry": engine.registry.cardinalities(),
        }

    @app.get("/tasks")
    def tasks(
        state: str | None = None,
        week: str | None = None,
        market: str | None = None,
        role: str = Depends(reader),
    ):
        problems = engine.tasks_by(state=state, week=week, market=market)
        return {
            "schema": SCHEMA_VERSION,
            "tasks": [
                {
                    "id": p.id,
                    "question": p.question,
                    "state": p.state.value.value,
                    "track": p.track.value,
                    "level": p.level.value,
                    "market": p.market,
                    "horizon": p.horizon.value,
                    "week": p.week,
                    "t_g": isoformat(p.t_g),
                    "t_d": isoformat(p.t_d),
                    "t_e": isoformat(p.t_e),
                    "truth": _truth_view(engine, p.id),
                }
                for p in problems
            ],
        }

    @app.get("/candidates")
    def candidates(stage: str | None = None, role: str = Depends(reader)):
        out = []
        for cand in engine.review_queue():
            if stage and cand.stage.value != stage:
                continue
            out.append({
                "candidate_id": cand.candidate_id,
                "stage": cand.stage.value,
                "question": cand.draft_question,
                "uncertainty": cand.uncertainty,
                "risk_notes": cand.risk_notes,
                "kind": cand.kind,
                "classification": (
                    f"event:{cand.event_type_id}" if cand.kind == "corporate"
                    else f"{cand.subcategory}:{cand.economy}"
                ),
                "evidence_record_ids": list(cand.evidence_record_ids),
                "task_id": cand.task_id,
            })
        report = engine.approval_report()
        return {"schema": SCHEMA_VERSION, "candidates": out, "approval_report": report}

    @app.post("/candidates/{candidate_id}/review")
    def review(candidate_id: str, body: ReviewBody, role: str = Depends(expert)):
        decided_at = parse_ts(body.decided_at) if body.decided_at else datetime.now(timezone.utc)
        decision = nr.ReviewDecision(
            candidate_id=candidate_id,
            reviewer_id=body.reviewer_id,
            verdict=nr.Verdict(body.verdict),
            notes=body.notes,
            decided_at=decided_at,
        )
        try:
            problem = engine.submit_review(decision)
        except EngineError as e:
            status = 409 if "double decision" in str(e) else 404
            raise HTTPException(status_code=status, detail=str(e))
        return {
            "schema": SCHEMA_VERSION,
            "task_id": problem.id,
            "state": problem.state.value.value,
        }

    @app.get("/resolutions/pending")
    def pending(role: str = Depends(reader)):
        out = []
        for proposal in engine.pending_proposals():
            task = engine.tasks[proposal.task_id].problem
            out.append({
                "task_id": proposal.task_id,
                "question": task.question,
                "proposed": proposal.proposed.value,
                "basis": proposal.basis.value,
                "phase1": list(proposal.bundle.phase1_official),
                "phase2": list(proposal.bundle.phase2_checks),
                "phase3": list(proposal.bundle.phase3_denials),
                "assembled_at": isoformat(proposal.bundle.assembled_at),
            })
        return {"schema": SCHEMA_VERSION, "proposals": out}

    @app.post("/proposals/{task_id}/verify")
    def verify(task_id: str, body: VerifyBody, role: str = Depends(expert)):
        if body.verdict == "Override" and not body.reason:
            raise HTTPException(status_code=422, detail="Override requires a reason")
        verified_at = parse_ts(body.verified_at) if body.verified_at else datetime.now(timezone.utc)
        decision = rs.ExpertVerification(
            task_id=task_id,
            verifier_id=body.verifier_id,
            verdict=rs.VerificationVerdict(body.verdict),
            verified_at=verified_at,
            override_value=Binary(body.value) if body.value else None,
            reason=body.reason,
        )
        try:
            truth = engine.verify_proposal(task_id, decision)
        except rs.DoubleVerification as e:
            raise HTTPException(status_code=409, detail=str(e))
        except (EngineError, rs.ResolverError) as e:
            raise HTTPException(status_code=404, detail=str(e))
        return {
            "schema": SCHEMA_VERSION,
            "task_id": task_id,
            "value": truth.value.value if isinstance(truth.value, Binary) else truth.value,
            "method": truth.method.value,
            "state": engine.tasks[task_id].problem.state.value.value,
        }

    @app.get("/leaderboard")
    def leaderboard(
        group: str = Query(default="model"),
        week: str | None = None,
        role: str = Depends(reader),
    ):
        grouping = [g.strip() for g in group.split(",") if g.strip()]
        for g in grouping:
            if g not in GROUPING_KEYS:
                raise HTTPException(status_code=422, detail=f"unknown grouping key {g!r}")
        try:
            slices = engine.leaderboard(grouping, week=week)
        except ScoringError as e:
            raise HTTPException(status_code=422, detail=str(e))
        return {
            "schema": SCHEMA_VERSION,
            "grouping": grouping,
            "slices": [
                {**s.key_dict(), "n": s.n, "accuracy": round(s.accuracy, 4)}
                for s in slices
            ],
            "export": "\n".join(leaderboard_lines(slices, grouping)),
            "no_data": len(slices) == 0,
        }

    @app.post("/ingest")
    def ingest(body: IngestBody, role: str = Depends(admin)):
        try:
            record = TimestampedRecord.from_wire(body.model_dump())
            rid = engine.store.ingest(record)
        except DuplicateRecord as e:
            raise HTTPException(status_code=409, detail=str(e))
        except (StoreError, ValueError) as e:
            raise HTTPException(status_code=422, detail=str(e))
        engine.store.append_event(
            "audit:ingest", "audit", datetime.now(timezone.utc),
            {"kind": "api-ingest", "record_id": rid},
        )
        return {"schema": SCHEMA_VERSION, "record_id": rid}

    return app


def _truth_view(engine: Engine, task_id: str):
    truth = engine.tasks[task_id].truth
    if truth is None:
        return None
    value = truth.value.value if isinstance(truth.value, Binary) else truth.value
    return {"value": value, "method": truth.method.value, "determined_at": isoformat(truth.determined_at)}
