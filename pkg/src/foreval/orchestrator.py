"""Weekly batches, standardized prompts, and model invocation.

Batches are cut every Thursday; the forecast deadline is the following
Sunday 23:59 in UTC+8, stored as a UTC instant. All (task, model)
invocations in a batch fan out concurrently under a per-adapter
concurrency limit and rate budget, since real model APIs throttle.

Acceptance of a response is judged against the orchestrator's clock, not
the adapter's claim: anything received after the deadline is stored for
audit but flagged late and never scored. Adapters that cannot honor an
information cutoff are flagged so their predictions carry an
isolation-unverified marker.
"""
from __future__ import annotations

import hashlib
import re
import threading
import time as _time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta, timezone
from typing import Callable, Protocol

from .model import AnswerKind, Binary, ForecastingProblem, Level, State, Track
from .registry import RegistrySet

BENCH_TZ = timezone(timedelta(hours=8))
BATCH_HOUR_LOCAL = 12  # Thursday noon UTC+8


class OrchestratorError(Exception):
    pass


class ParseError(OrchestratorError):
    """Response does not contain a usable answer."""


class AdapterTransientError(OrchestratorError):
    """Retryable transport/timeout failure."""


def batch_times(week: str) -> tuple[datetime, datetime]:
    """(t_g, t_d) for a Thursday batch date like '2025-10-30'.

    t_g is Thursday 12:00 UTC+8; t_d the following Sunday 23:59 UTC+8.
    Both returned as UTC.
    """
    d = date.fromisoformat(week)
    if d.weekday() != 3:
        raise OrchestratorError(f"batch week {week} is not a Thursday")
    t_g = datetime(d.year, d.month, d.day, BATCH_HOUR_LOCAL, 0, tzinfo=BENCH_TZ)
    sunday = d + timedelta(days=3)
    t_d = datetime(sunday.year, sunday.month, sunday.day, 23, 59, tzinfo=BENCH_TZ)
    return t_g.astimezone(timezone.utc), t_d.astimezone(timezone.utc)


@dataclass(frozen=True)
class WeeklyBatch:
    batch_id: str  # the Thursday date
    t_g: datetime
    t_d: datetime
    task_ids: tuple[str, ...]
    task_set_hash: str

    def to_wire(self) -> dict:
        from .model import isoformat
        return {
            "schema": "batch/1",
            "batch_id": self.batch_id,
            "t_g": isoformat(self.t_g),
            "t_d": isoformat(self.t_d),
            "task_ids": list(self.task_ids),
            "task_set_hash": self.task_set_hash,
        }


def build_batch(week: str, tasks: list[ForecastingProblem]) -> WeeklyBatch:
    """Collect published tasks sharing the week's deadline into a batch.

    The task set hash freezes membership: it must never change for the
    batch's duration.
    """
    t_g, t_d = batch_times(week)
    for t in tasks:
        if t.state.value is not State.PUBLISHED:
            raise OrchestratorError(f"task {t.id} is {t.state.value.value}, not Published")
        if t.t_d != t_d:
            raise OrchestratorError(
                f"task {t.id} deadline {t.t_d} does not match batch deadline {t_d}"
            )
        if t.t_g != t_g:
            raise OrchestratorError(
                f"task {t.id} generation time {t.t_g} does not match batch t_g {t_g}"
            )
    ids = tuple(sorted(t.id for t in tasks))
    digest = hashlib.sha256("\n".join(ids).encode()).hexdigest()
    return WeeklyBatch(batch_id=week, t_g=t_g, t_d=t_d, task_ids=ids, task_set_hash=digest)


# --- prompts -----------------------------------------------------------------

SUBMISSION_BINARY = (
    "| Field | Value |\n"
    "|-------|-------|\n"
    "| Prediction (YES/NO) | [Your prediction] |"
)
SUBMISSION_NUMERIC = (
    "| Field | Value |\n"
    "|-------|-------|\n"
    "| Prediction (Numeric) | [Your estimate] |"
)

UNIT_LABEL = {
    "million-scale": "millions",
    "percentage": "percent",
    "ratio": "ratio",
    "per-share": "per share",
    "count": "days/count",
    "rate": "percent (rate)",
    "fx": "exchange rate",
    "index": "index points",
    "level": "reported unit",
}


@dataclass(frozen=True)
class PromptPackage:
    question: str
    details_block: str
    requirements_block: str
    submission_block: str
    guidelines_block: str

    def render(self) -> str:
        return "\n\n".join([
            self.question,
            self.details_block,
            self.requirements_block,
            self.submission_block,
            self.guidelines_block,
        ])


def render_prompt(task: ForecastingProblem, registry: RegistrySet) -> PromptPackage:
    """Deterministic five-block prompt for a published task."""
    from .model import isoformat

    details: list[str] = []
    if task.subject.kind in ("company_metric", "corporate_event"):
        company = registry.company(task.subject.company_id)
        details += [
            f"- Company: {company.name}",
            f"- Ticker: {company.ticker}",
            f"- Index: {', '.join(company.indices)}",
        ]
        if task.subject.kind == "corporate_event":
            details.append(f"- Event Type: {registry.event_type(task.subject.event_type_id).name}")
            header = "**Event Details**"
        else:
            metric = registry.metric(task.subject.metric_id)
            details += [
                f"- Metric: {metric.name}",
                f"- Fiscal Period: {task.period}",
                f"- Unit: {UNIT_LABEL[metric.unit_class]}",
            ]
            header = "**Metric Details**"
    elif task.subject.kind == "macro_indicator":
        spec = registry.indicator(task.subject.indicator_id)
        economy = "Global" if spec.economy == "GLOBAL" else registry.economy(spec.economy).name
        details += [
            f"- Economy: {economy}",
            f"- Indicator: {spec.display_name}",
            f"- Release Date: {task.period}",
            f"- Unit: {UNIT_LABEL[spec.unit_class]}",
        ]
        header = "**Indicator Details**"
    else:
        sub = registry.subcategory(task.subject.subcategory)
        rule = registry.grounding_for(task.subject.subcategory, task.subject.economy)
        details += [
            f"- Economy: {registry.economy(task.subject.economy).name}",
            f"- Event Class: {sub.code} {sub.description}",
            f"- Authority: {rule.authority}",
        ]
        header = "**Event Details**"

    if task.answer_kind is AnswerKind.BINARY:
        ask = "Provide your prediction as either **YES** or **NO**"
        submission = SUBMISSION_BINARY
    else:
        ask = "Provide your prediction as a single numeric estimate"
        submission = SUBMISSION_NUMERIC

    requirements = "\n".join([
        "**Requirements:**",
        "",
        ask,
        "",
        f"Forecast deadline: {isoformat(task.t_d)}",
        "",
        "Base your assessment on:",
        "- Recent news and official announcements",
        "- Historical patterns for this subject",
        "- Current market and industry context",
        "- Any other relevant public information",
    ])
    guidelines = "\n".join([
        "**Additional Guidelines**",
        "",
        "1. **Independence:** Work from filings, primary sources, and your own analysis; do not simply repeat prediction markets or third-party forecasts.",
        "2. **Recency:** Weight the newest available material and state the cut-off date of the data you used.",
        "3. **Output Format:** Reply with ONLY the completed markdown table from the Submission Format; no text outside the table.",
    ])
    return PromptPackage(
        question=task.question,
        details_block="\n".join([header] + details),
        requirements_block=requirements,
        submission_block="\n".join(["**Submission Format**", "", "Present your prediction in this markdown table:", "", submission]),
        guidelines_block=guidelines,
    )


# --- response parsing ----------------------------------------------------------

NUMBER_RE = re.compile(
    r"(-?\$?\d{1,3}(?:,\d{3})+(?:\.\d+)?|-?\$?\d+(?:\.\d+)?)\s*(million|billion|bn|mn)?",
    re.IGNORECASE,
)
YESNO_RE = re.compile(r"\b(YES|NO)\b", re.IGNORECASE)


def _tables(raw: str) -> list[list[list[str]]]:
    """Markdown tables as lists of rows of cells, in document order."""
    tables = []
    current: list[list[str]] = []
    for line in raw.splitlines():
        stripped = line.strip()
        if stripped.startswith("|") and stripped.count("|") >= 2:
            cells = [c.strip() for c in stripped.strip("|").split("|")]
            if all(set(c) <= set("-: ") for c in cells):
                continue  # separator row
            current.append(cells)
        else:
            if current:
                tables.append(current)
                current = []
    if current:
        tables.append(current)
    return tables


def parse_response(raw: str, kind: AnswerKind) -> float | Binary:
    """Extract the structured answer from a model response.

    Binary answers come from the first markdown table (case-insensitive);
    a response carrying both YES and NO in its answer cells, or no table at
    all, is unparsable. Numeric answers prefer the table's prediction row
    and fall back to the first number in the text, honoring thousands
    separators and million/billion words (normalized to millions).
    """
    if not raw or not raw.strip():
        raise ParseError("unparsable: empty response")
    tables = _tables(raw)
    if kind is AnswerKind.BINARY:
        if not tables:
            raise ParseError("unparsable: no submission table")
        table = tables[0]
        cells = _answer_cells(table)
        tokens = {m.group(1).upper() for cell in cells for m in YESNO_RE.finditer(cell)}
        if tokens == {"YES"}:
            return Binary.YES
        if tokens == {"NO"}:
            return Binary.NO
        if not tokens:
            raise ParseError("unparsable: no YES/NO in submission table")
        raise ParseError("unparsable: response contains both YES and NO")

    texts: list[str] = []
    if tables:
        texts.extend(_answer_cells(tables[0]))
    texts.append(raw)
    for text in texts:
        m = NUMBER_RE.search(text)
        if m:
            value = float(m.group(1).replace(",", "").replace("$", ""))
            scale = (m.group(2) or "").lower()
            if scale in ("billion", "bn"):
                value *= 1000.0
            return value
    raise ParseError("unparsable: no number in response")


def _answer_cells(table: list[list[str]]) -> list[str]:
    """Value cells of the prediction row, else all non-label cells."""
    for row in table:
        if row and "prediction" in row[0].lower() and len(row) > 1:
            return row[1:]
    cells = []
    for row in table:
        for cell in row[1:] if len(row) > 1 else row:
            if "prediction" in cell.lower() and "(" in cell:
                continue  # header echo like "Prediction (YES/NO)"
            cells.append(cell)
    return cells


# --- adapters -------------------------------------------------------------------

@dataclass(frozen=True)
class AdapterLimits:
    concurrency: int = 4
    min_interval_s: float = 0.0
    max_retries: int = 2
    backoff_s: float = 0.0


@dataclass(frozen=True)
class InvocationRequest:
    task_id: str
    prompt: str
    cutoff: datetime
    answer_kind: AnswerKind


@dataclass(frozen=True)
class AdapterResponse:
    text: str
    claimed_submitted_at: datetime | None = None
    extra_delay_s: float = 0.0  # simulated response latency for stubs


class ModelAdapter(Protocol):
    model_id: str
    cutoff_support: bool
    limits: AdapterLimits

    def invoke(self, request: InvocationRequest) -> AdapterResponse: ...


@dataclass
class EchoAdapter:
    """Returns a fixed response body for every request."""

    model_id: str
    text: str
    cutoff_support: bool = True
    limits: AdapterLimits = field(default_factory=AdapterLimits)

    def invoke(self, request: InvocationRequest) -> AdapterResponse:
        return AdapterResponse(text=self.text)


@dataclass
class ScriptedAdapter:
    """Responses scripted per task id, with a deterministic hash fallback.

    Script entries: {"text": ..., "extra_delay_s": ...}. Unscripted binary
    tasks answer YES/NO by hash parity; unscripted numeric tasks answer a
    hash-derived estimate. Identical inputs always produce identical
    responses.
    """

    model_id: str
    script: dict[str, dict] = field(default_factory=dict)
    cutoff_support: bool = True
    limits: AdapterLimits = field(default_factory=AdapterLimits)

    def invoke(self, request: InvocationRequest) -> AdapterResponse:
        entry = self.script.get(request.task_id)
        if entry is not None:
            return AdapterResponse(
                text=entry.get("text", ""),
                extra_delay_s=float(entry.get("extra_delay_s", 0.0)),
            )
        digest = hashlib.sha256(f"{self.model_id}:{request.task_id}".encode()).digest()
        if request.answer_kind is AnswerKind.BINARY:
            answer = "YES" if digest[0] % 2 == 0 else "NO"
        else:
            answer = f"{(int.from_bytes(digest[:4], 'big') % 1_000_000) / 100.0:.2f}"
        table = f"| Field | Value |\n|-------|-------|\n| Prediction | {answer} |"
        return AdapterResponse(text=table)


@dataclass
class FlakyAdapter:
    """Wraps another adapter; fails transiently n times per task first."""

    inner: ScriptedAdapter
    failures: int = 2

    def __post_init__(self):
        self._attempts: dict[str, int] = {}
        self.model_id = self.inner.model_id
        self.cutoff_support = self.inner.cutoff_support
        self.limits = self.inner.limits

    def invoke(self, request: InvocationRequest) -> AdapterResponse:
        seen = self._attempts.get(request.task_id, 0)
        self._attempts[request.task_id] = seen + 1
        if seen < self.failures:
            raise AdapterTransientError(f"simulated timeout #{seen + 1}")
        return self.inner.invoke(request)


class HttpAdapter:
    """Remote model endpoint adapter (production path).

    Posts {prompt, cutoff} to the configured endpoint; the credential is
    read from the named environment variable at call time. Transport and
    HTTP 5xx/429 failures are retryable.
    """

    def __init__(self, model_id: str, endpoint: str, credential_env: str = "",
                 params: dict | None = None, cutoff_support: bool = True,
                 limits: AdapterLimits | None = None, timeout_s: float = 60.0):
        self.model_id = model_id
        self.endpoint = endpoint
        self.credential_env = credential_env
        self.params = params or {}
        self.cutoff_support = cutoff_support
        self.limits = limits or AdapterLimits()
        self.timeout_s = timeout_s

    def invoke(self, request: InvocationRequest) -> AdapterResponse:
        import os

        import httpx

        from .model import isoformat
        headers = {}
        if self.credential_env:
            token = os.environ.get(self.credential_env, "")
            if token:
                headers["Authorization"] = f"Bearer {token}"
        body = {
            "model": self.model_id,
            "prompt": request.prompt,
            "cutoff": isoformat(request.cutoff),
            **self.params,
        }
        try:
            resp = httpx.post(self.endpoint, json=body, headers=headers, timeout=self.timeout_s)
        except httpx.HTTPError as e:
            raise AdapterTransientError(str(e)) from e
        if resp.status_code in (429,) or resp.status_code >= 500:
            raise AdapterTransientError(f"HTTP {resp.status_code}")
        if resp.status_code != 200:
            raise OrchestratorError(f"HTTP {resp.status_code}: {resp.text[:200]}")
        return AdapterResponse(text=resp.json().get("text", ""))


# --- invocation loop --------------------------------------------------------------

@dataclass(frozen=True)
class InvocationOutcome:
    task_id: str
    model_id: str
    raw_text: str
    received_at: datetime
    retries: int
    late: bool
    failed: bool = False
    error: str = ""
    isolation_unverified: bool = False


class _AdapterGate:
    """Concurrency limit plus a min-interval rate budget per adapter."""

    def __init__(self, limits: AdapterLimits):
        self._sem = threading.BoundedSemaphore(max(1, limits.concurrency))
        self._interval = limits.min_interval_s
        self._lock = threading.Lock()
        self._last = 0.0

    def __enter__(self):
        self._sem.acquire()
        if self._interval > 0:
            with self._lock:
                wait = self._last + self._interval - _time.monotonic()
                self._last = max(_time.monotonic(), self._last + self._interval)
            if wait > 0:
                _time.sleep(wait)
        return self

    def __exit__(self, *exc):
        self._sem.release()


def run_batch(
    batch: WeeklyBatch,
    tasks: dict[str, ForecastingProblem],
    adapters: list,
    registry: RegistrySet,
    now_fn: Callable[[], datetime],
    sleep_fn: Callable[[float], None] = _time.sleep,
) -> list[InvocationOutcome]:
    """Invoke every adapter on every batch task concurrently.

    Per (task, model): bounded retries with backoff on transient failures,
    at most one accepted response, receive time taken from the
    orchestrator clock. Invocations attempted after the deadline are
    refused up front.
    """
    gates = {a.model_id: _AdapterGate(a.limits) for a in adapters}
    jobs = []
    for adapter in adapters:
        for tid in batch.task_ids:
            jobs.append((adapter, tasks[tid]))

    def one(job) -> InvocationOutcome:
        adapter, task = job
        prompt = render_prompt(task, registry).render()
        request = InvocationRequest(
            task_id=task.id, prompt=prompt, cutoff=batch.t_d, answer_kind=task.answer_kind,
        )
        if now_fn() > batch.t_d:
            return InvocationOutcome(
                task_id=task.id, model_id=adapter.model_id, raw_text="",
                received_at=now_fn(), retries=0, late=True, failed=True,
                error="predictions closed at deadline",
            )
        retries = 0
        while True:
            try:
                with gates[adapter.model_id]:
                    response = adapter.invoke(request)
                break
            except AdapterTransientError as e:
                if retries >= adapter.limits.max_retries:
                    return InvocationOutcome(
                        task_id=task.id, model_id=adapter.model_id, raw_text="",
                        received_at=now_fn(), retries=retries, late=False,
                        failed=True, error=str(e),
                    )
                retries += 1
                if adapter.limits.backoff_s > 0:
                    sleep_fn(adapter.limits.backoff_s * retries)
        received = now_fn() + timedelta(seconds=response.extra_delay_s)
        return InvocationOutcome(
            task_id=task.id,
            model_id=adapter.model_id,
            raw_text=response.text,
            received_at=received,
            retries=retries,
            late=received > batch.t_d,
            isolation_unverified=not adapter.cutoff_support,
        )

    outcomes: dict[tuple[str, str], InvocationOutcome] = {}
    max_workers = max(1, sum(a.limits.concurrency for a in adapters))
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        for outcome in pool.map(one, jobs):
            key = (outcome.task_id, outcome.model_id)
            if key in outcomes:
                continue  # one accepted response per task x model
            outcomes[key] = outcome
    return [outcomes[k] for k in sorted(outcomes)]
