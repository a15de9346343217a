"""Timestamped, append-only datastore with as-of queries.

Everything the pipeline reads or writes flows through here: ingested
records (filings, releases, news, quotes), and the per-task event log
that is the system of record for replay.

Temporal isolation is the load-bearing contract: query_as_of never
returns a record published after the cutoff, and the cutoff is never
optional. The boundary is inclusive (publish time == cutoff is visible),
matching the information-set-at-deadline semantics used everywhere else.

Storage is a single-node embedded layout: one JSONL file for records and
one for events, appended and flushed before a write returns. Reads are
served from in-memory indexes built at open; writers hold a lock, readers
see immutable snapshots.
"""
from __future__ import annotations

import bisect
import enum
import json
import threading
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path

from .model import isoformat, parse_ts


class StoreError(Exception):
    pass


class DuplicateRecord(StoreError):
    pass


class SourceCategory(str, enum.Enum):
    CORPORATE_FILING = "CorporateFiling"
    GOVERNMENT_RELEASE = "GovernmentRelease"
    FINANCIAL_NEWS = "FinancialNews"
    MARKET_DATA = "MarketData"


@dataclass(frozen=True)
class TimestampedRecord:
    record_id: str
    source_category: SourceCategory
    publish_time: datetime
    subject_keys: frozenset[str]
    payload: dict

    def to_wire(self) -> dict:
        return {
            "schema": "record/1",
            "record_id": self.record_id,
            "source_category": self.source_category.value,
            "publish_time": isoformat(self.publish_time),
            "subject_keys": sorted(self.subject_keys),
            "payload": self.payload,
        }

    @staticmethod
    def from_wire(rec: dict) -> "TimestampedRecord":
        if not rec.get("publish_time"):
            raise StoreError(f"record {rec.get('record_id')!r} has no publish time")
        return TimestampedRecord(
            record_id=rec["record_id"],
            source_category=SourceCategory(rec["source_category"]),
            publish_time=parse_ts(rec["publish_time"]),
            subject_keys=frozenset(rec.get("subject_keys", [])),
            payload=rec.get("payload", {}),
        )


@dataclass(frozen=True)
class AsOfQuery:
    """Filter plus a mandatory cutoff; matching is subject OR-semantics."""

    cutoff: datetime
    subject_keys: frozenset[str] = frozenset()
    source_categories: frozenset[SourceCategory] = frozenset()


@dataclass(frozen=True)
class StoredEvent:
    stream: str
    seq: int
    kind: str
    at: datetime
    body: dict

    def to_wire(self) -> dict:
        return {
            "schema": "event/1",
            "stream": self.stream,
            "seq": self.seq,
            "kind": self.kind,
            "at": isoformat(self.at),
            "body": self.body,
        }

    @staticmethod
    def from_wire(rec: dict) -> "StoredEvent":
        return StoredEvent(
            stream=rec["stream"],
            seq=int(rec["seq"]),
            kind=rec["kind"],
            at=parse_ts(rec["at"]),
            body=rec.get("body", {}),
        )


class Datastore:
    """Append-only record store + event log. Nothing is ever mutated or deleted."""

    def __init__(self, directory: str | Path | None = None):
        self._lock = threading.RLock()
        self._records: dict[str, TimestampedRecord] = {}
        # (publish_time, record_id) kept sorted for as-of scans
        self._order: list[tuple[datetime, str]] = []
        self._by_subject: dict[str, list[tuple[datetime, str]]] = {}
        self._events: list[StoredEvent] = []
        self._stream_seq: dict[str, int] = {}
        self._dir = Path(directory) if directory is not None else None
        self._records_fh = None
        self._events_fh = None
        if self._dir is not None:
            self._dir.mkdir(parents=True, exist_ok=True)
            self._load()
            self._records_fh = (self._dir / "records.jsonl").open("a", encoding="utf-8")
            self._events_fh = (self._dir / "events.jsonl").open("a", encoding="utf-8")

    # -- records ------------------------------------------------------------

    def ingest(self, record: TimestampedRecord) -> str:
        if record.publish_time is None:
            raise StoreError(f"record {record.record_id!r} has no publish time")
        with self._lock:
            if record.record_id in self._records:
                raise DuplicateRecord(f"duplicate record id: {record.record_id!r}")
            self._records[record.record_id] = record
            key = (record.publish_time, record.record_id)
            bisect.insort(self._order, key)
            for sk in record.subject_keys:
                bisect.insort(self._by_subject.setdefault(sk, []), key)
            if self._records_fh is not None:
                self._records_fh.write(json.dumps(record.to_wire(), sort_keys=True) + "\n")
                self._records_fh.flush()
        return record.record_id

    def query_as_of(self, q: AsOfQuery) -> list[TimestampedRecord]:
        """All matching records with publish time <= cutoff.

        Ordered by publish time ascending, ties broken by record id. Ingest
        order never affects the result.
        """
        if q.cutoff is None:
            raise StoreError("as-of query requires a cutoff")
        with self._lock:
            if q.subject_keys:
                seen: set[str] = set()
                candidates: list[tuple[datetime, str]] = []
                for sk in q.subject_keys:
                    lst = self._by_subject.get(sk, [])
                    hi = bisect.bisect_right(lst, (q.cutoff, "￿"))
                    for key in lst[:hi]:
                        if key[1] not in seen:
                            seen.add(key[1])
                            candidates.append(key)
                candidates.sort()
            else:
                hi = bisect.bisect_right(self._order, (q.cutoff, "￿"))
                candidates = list(self._order[:hi])
            out = []
            for _, rid in candidates:
                rec = self._records[rid]
                if q.source_categories and rec.source_category not in q.source_categories:
                    continue
                out.append(rec)
            return out

    def record(self, record_id: str) -> TimestampedRecord:
        rec = self._records.get(record_id)
        if rec is None:
            raise StoreError(f"no such record: {record_id!r}")
        return rec

    def record_count(self) -> int:
        return len(self._records)

    def all_records(self) -> list[TimestampedRecord]:
        with self._lock:
            return [self._records[rid] for _, rid in self._order]

    # -- event log ----------------------------------------------------------

    def append_event(self, stream: str, kind: str, at: datetime, body: dict) -> int:
        """Append to a stream; sequence numbers are strictly increasing per stream."""
        with self._lock:
            seq = self._stream_seq.get(stream, 0) + 1
            self._stream_seq[stream] = seq
            ev = StoredEvent(stream=stream, seq=seq, kind=kind, at=at, body=body)
            self._events.append(ev)
            if self._events_fh is not None:
                self._events_fh.write(json.dumps(ev.to_wire(), sort_keys=True) + "\n")
                self._events_fh.flush()
            return seq

    def events(self, stream: str | None = None) -> list[StoredEvent]:
        with self._lock:
            if stream is None:
                return list(self._events)
            return [e for e in self._events if e.stream == stream]

    def streams(self) -> list[str]:
        with self._lock:
            return sorted(self._stream_seq)

    # -- bulk import / export ------------------------------------------------

    def import_tape(self, path: str | Path) -> int:
        """Ingest a line-delimited record tape; returns the number ingested."""
        n = 0
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as e:
                raise StoreError(f"{path}:{lineno}: bad JSON ({e})") from e
            self.ingest(TimestampedRecord.from_wire(rec))
            n += 1
        return n

    def export_as_of(self, cutoff: datetime, path: str | Path) -> int:
        """Write the as-of snapshot of all records for audit."""
        recs = self.query_as_of(AsOfQuery(cutoff=cutoff))
        with Path(path).open("w", encoding="utf-8") as fh:
            for rec in recs:
                fh.write(json.dumps(rec.to_wire(), sort_keys=True) + "\n")
        return len(recs)

    def export_events(self, path: str | Path) -> int:
        with self._lock, Path(path).open("w", encoding="utf-8") as fh:
            for ev in self._events:
                fh.write(json.dumps(ev.to_wire(), sort_keys=True) + "\n")
            return len(self._events)

    def import_events(self, path: str | Path) -> int:
        """Replay an exported event log into this (fresh) store."""
        n = 0
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            ev = StoredEvent.from_wire(json.loads(line))
            with self._lock:
                expected = self._stream_seq.get(ev.stream, 0) + 1
                if ev.seq != expected:
                    raise StoreError(
                        f"stream {ev.stream!r}: sequence {ev.seq} out of order (expected {expected})"
                    )
                self._stream_seq[ev.stream] = ev.seq
                self._events.append(ev)
                if self._events_fh is not None:
                    self._events_fh.write(json.dumps(ev.to_wire(), sort_keys=True) + "\n")
                    self._events_fh.flush()
            n += 1
        return n

    # -- persistence ----------------------------------------------------------

    def _load(self) -> None:
        rec_path = self._dir / "records.jsonl"
        if rec_path.exists():
            for line in rec_path.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                rec = TimestampedRecord.from_wire(json.loads(line))
                self._records[rec.record_id] = rec
                key = (rec.publish_time, rec.record_id)
                self._order.append(key)
                for sk in rec.subject_keys:
                    self._by_subject.setdefault(sk, []).append(key)
            self._order.sort()
            for lst in self._by_subject.values():
                lst.sort()
        ev_path = self._dir / "events.jsonl"
        if ev_path.exists():
            for line in ev_path.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                ev = StoredEvent.from_wire(json.loads(line))
                self._events.append(ev)
                self._stream_seq[ev.stream] = max(self._stream_seq.get(ev.stream, 0), ev.seq)

    def close(self) -> None:
        if self._records_fh is not None:
            self._records_fh.close()
        if self._events_fh is not None:
            self._events_fh.close()
