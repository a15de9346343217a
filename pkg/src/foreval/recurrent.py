"""Recurrent numeric task generation from disclosure calendars.

Two steps: scan the ingested calendar for disclosures scheduled inside the
batch's prediction window, then render validated tasks from the expert
templates. Corporate coverage is capped by stratified sampling at up to
30% of reporting companies per market (ceiling, floor of one) so coverage
stays balanced across regions; macro coverage takes every scheduled
indicator release.

Everything here is a pure function over the registry and a datastore
snapshot, so generation parallelizes per economy and replays exactly
given the same seed.
"""
from __future__ import annotations

import math
import zlib
import random
from dataclasses import dataclass
from datetime import datetime, timedelta

from .model import (
    AnswerKind,
    ForecastingProblem,
    Horizon,
    Level,
    State,
    Subject,
    TaskState,
    Track,
    validate_problem,
)
from .registry import Company, RegistrySet
from .store import AsOfQuery, Datastore, SourceCategory

PREDICTION_WINDOW = timedelta(days=7)
RESOLUTION_GRACE = timedelta(hours=24)  # releases slip intraday; first attempt waits this long
SAMPLING_CAP = 0.30

CORPORATE_TEMPLATE = "Using available financial data, estimate {entity}'s {metric} for {period}."
MACRO_TEMPLATE = "Using available economic data, estimate {entity}'s {metric} for {period}."

CADENCE_HORIZON = {
    "weekly": Horizon.WEEKLY,
    "monthly": Horizon.MONTHLY,
    "quarterly": Horizon.QUARTERLY,
}


class GenerationError(Exception):
    pass


@dataclass(frozen=True)
class DisclosureEvent:
    subject_id: str  # company id or macro indicator id
    kind: str  # "corporate" | "macro"
    scheduled_release: datetime
    period: str  # e.g. "2025 Q3" or "November 5, 2025"
    metric_id: int | None = None  # corporate metric to ask about
    source_record: str = ""


@dataclass(frozen=True)
class QuestionTemplate:
    template_id: str
    level: Level
    pattern: str

    def render(self, entity: str, metric: str, period: str) -> str:
        if not (entity and metric and period):
            missing = [n for n, v in (("entity", entity), ("metric", metric), ("period", period)) if not v]
            raise GenerationError(f"unresolvable slot: {', '.join(missing)}")
        return self.pattern.format(entity=entity, metric=metric, period=period)


TEMPLATES = {
    Level.CORPORATE: QuestionTemplate("rec-corp-1", Level.CORPORATE, CORPORATE_TEMPLATE),
    Level.MACRO: QuestionTemplate("rec-macro-1", Level.MACRO, MACRO_TEMPLATE),
}


def scan_calendar(
    window_start: datetime,
    window_end: datetime,
    registry: RegistrySet,
    store: Datastore,
) -> list[DisclosureEvent]:
    """Disclosures scheduled inside (window_start, window_end].

    Calendar entries are ingested records flagged payload["scheduled"];
    corporate ones announce an earnings release, macro ones an indicator
    release.
    """
    out: list[DisclosureEvent] = []
    records = store.query_as_of(AsOfQuery(
        cutoff=window_end,
        source_categories=frozenset({SourceCategory.CORPORATE_FILING, SourceCategory.GOVERNMENT_RELEASE}),
    ))
    for rec in records:
        payload = rec.payload
        if not payload.get("scheduled"):
            continue
        release_at = payload.get("release_at")
        if not release_at:
            continue
        from .model import parse_ts
        release = parse_ts(release_at)
        if not (window_start < release <= window_end):
            continue
        if rec.source_category is SourceCategory.CORPORATE_FILING:
            out.append(DisclosureEvent(
                subject_id=payload["company"],
                kind="corporate",
                scheduled_release=release,
                period=payload["period"],
                metric_id=payload.get("metric_id"),
                source_record=rec.record_id,
            ))
        else:
            out.append(DisclosureEvent(
                subject_id=payload["indicator"],
                kind="macro",
                scheduled_release=release,
                period=payload["period"],
                source_record=rec.record_id,
            ))
    out.sort(key=lambda e: (e.scheduled_release, e.subject_id))
    return out


def sample_size(n_reporting: int, cap: float = SAMPLING_CAP) -> int:
    """min(n, ceil(cap*n)): the 30% ceiling keeps at least one reporter covered."""
    if n_reporting <= 0:
        return 0
    return min(n_reporting, math.ceil(cap * n_reporting))


def stratified_sample(
    reporting: dict[str, list[Company]],
    cap: float = SAMPLING_CAP,
    seed: int = 0,
) -> dict[str, list[Company]]:
    """Uniform without-replacement sample per economy, capped and seeded.

    The per-economy RNG stream is derived from (seed, economy) with a
    stable hash, so adding one market never reshuffles another.
    """
    if not (0 < cap <= 1):
        raise GenerationError(f"sampling cap out of range: {cap}")
    selected: dict[str, list[Company]] = {}
    for economy in sorted(reporting):
        companies = sorted(reporting[economy], key=lambda c: c.identifier)
        k = sample_size(len(companies), cap)
        rng = random.Random(zlib.crc32(f"{seed}:{economy}".encode()))
        selected[economy] = sorted(rng.sample(companies, k), key=lambda c: c.identifier)
    return selected


def instantiate(
    event: DisclosureEvent,
    registry: RegistrySet,
    t_g: datetime,
    t_d: datetime,
    week: str,
) -> ForecastingProblem:
    """Render a validated numeric task from a disclosure event.

    t_e is the scheduled release plus a 24h grace margin, never earlier
    than the release itself.
    """
    t_e = event.scheduled_release + RESOLUTION_GRACE
    if event.kind == "corporate":
        company = registry.company(event.subject_id)
        if event.metric_id is None:
            raise GenerationError(f"unresolvable slot: metric for {event.subject_id}")
        metric = registry.metric(event.metric_id)
        question = TEMPLATES[Level.CORPORATE].render(
            entity=f"{company.name} ({company.ticker})",
            metric=metric.name,
            period=event.period,
        )
        subject = Subject(
            kind="company_metric",
            company_id=company.identifier,
            metric_id=metric.metric_id,
            economy=company.market,
        )
        problem = ForecastingProblem(
            id=f"{week}:rec:corp:{company.identifier}:{metric.metric_id}:{_slug(event.period)}",
            question=question,
            t_g=t_g, t_d=t_d, t_e=t_e,
            track=Track.RECURRENT, level=Level.CORPORATE, horizon=Horizon.QUARTERLY,
            subject=subject, answer_kind=AnswerKind.NUMERIC,
            state=TaskState(State.PUBLISHED, t_g),
            period=event.period, week=week,
        )
    else:
        spec = registry.indicator(event.subject_id)
        economy_name = "Global markets" if spec.economy == "GLOBAL" else registry.economy(spec.economy).name
        question = TEMPLATES[Level.MACRO].render(
            entity=economy_name,
            metric=spec.display_name,
            period=event.period,
        )
        subject = Subject(kind="macro_indicator", indicator_id=spec.indicator_id, economy=spec.economy)
        problem = ForecastingProblem(
            id=f"{week}:rec:macro:{spec.indicator_id}:{_slug(event.period)}",
            question=question,
            t_g=t_g, t_d=t_d, t_e=t_e,
            track=Track.RECURRENT, level=Level.MACRO, horizon=CADENCE_HORIZON[spec.cadence],
            subject=subject, answer_kind=AnswerKind.NUMERIC,
            state=TaskState(State.PUBLISHED, t_g),
            period=event.period, week=week,
        )
    return validate_problem(problem)


def generate_recurrent(
    week: str,
    t_g: datetime,
    t_d: datetime,
    registry: RegistrySet,
    store: Datastore,
    seed: int = 0,
) -> list[ForecastingProblem]:
    """Full recurrent generation for one batch week.

    Macro: every scheduled indicator release in the window. Corporate:
    stratified sample of reporting companies, one task per sampled
    disclosure. Duplicate (subject, metric, period) combinations within
    the batch are dropped.
    """
    window_end = t_d + PREDICTION_WINDOW
    events = scan_calendar(t_d, window_end, registry, store)

    corp_events: dict[str, list[DisclosureEvent]] = {}
    problems: list[ForecastingProblem] = []
    seen: set[str] = set()
    for ev in events:
        if ev.kind == "macro":
            p = instantiate(ev, registry, t_g, t_d, week)
            if p.id not in seen:
                seen.add(p.id)
                problems.append(p)
        else:
            corp_events.setdefault(ev.subject_id, []).append(ev)

    reporting: dict[str, list[Company]] = {}
    for cid in corp_events:
        company = registry.company(cid)
        reporting.setdefault(company.market, []).append(company)
    chosen = stratified_sample(reporting, seed=seed)
    for economy in sorted(chosen):
        for company in chosen[economy]:
            for ev in corp_events[company.identifier]:
                p = instantiate(ev, registry, t_g, t_d, week)
                if p.id not in seen:
                    seen.add(p.id)
                    problems.append(p)
    return problems


def _slug(text: str) -> str:
    return text.replace(" ", "-").replace(",", "").lower()
