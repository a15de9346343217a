"""Immutable taxonomy registry.

Loads the shipped (or any conforming) set of delimited registry files,
validates every cardinality invariant, and serves lookups to the rest of
the pipeline. A loaded RegistrySet never mutates, so concurrent reads need
no synchronization.

Shipped tables and their contracts:
- economies: exactly 8, unique codes
- indices: exactly 9, snapshot date 2025-10-02
- companies: 1,314 distinct, each in at least one index, market matching
  the index economy
- macro_indicators: exactly 96 (2 global + 94 economy-specific; US ships
  no FX rate spec, SG no 1-year rate spec)
- corporate_metrics: exactly 121 across 9 categories
  (25/22/15/15/8/12/12/6/6)
- subcategories: exactly 26 macro event subcategories, MECE over A-I
- grounding_rules: exactly one rule per (subcategory, economy) = 208
- corporate_events: exactly 70 event types
- tolerance_rules: the data-driven scoring tolerance table
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

ECONOMY_CODES = ("US", "CN", "HK", "JP", "UK", "DE", "FR", "SG")
GLOBAL_SCOPE = "GLOBAL"

MACRO_UNIT_CLASSES = {"rate", "fx", "index", "level", "percentage"}
METRIC_UNIT_CLASSES = {"million-scale", "percentage", "ratio", "per-share", "count"}
CADENCES = {"weekly", "monthly", "quarterly"}
COMPARATORS = {">=", ">", "<=", "<", "=="}

EXPECTED_METRIC_CATEGORY_SIZES = {
    "Balance Sheet": 25,
    "Income Statement": 22,
    "Cash Flow": 15,
    "Profitability": 15,
    "Liquidity": 8,
    "Leverage": 12,
    "Efficiency": 12,
    "Coverage": 6,
    "Valuation": 6,
}


class RegistryError(Exception):
    """Raised on parse failures, cardinality violations, or bad lookups."""


@dataclass(frozen=True)
class Economy:
    code: str
    name: str
    utc_offset: int


@dataclass(frozen=True)
class EquityIndex:
    name: str
    economy: str
    snapshot_date: str


@dataclass(frozen=True)
class Company:
    identifier: str
    name: str
    market: str
    indices: tuple[str, ...]

    @property
    def ticker(self) -> str:
        return self.identifier.split(".")[0]


@dataclass(frozen=True)
class MacroIndicatorSpec:
    indicator_id: str
    indicator_type: str
    economy: str  # economy code or GLOBAL
    display_name: str
    unit_class: str
    cadence: str


@dataclass(frozen=True)
class CorporateMetricSpec:
    metric_id: int
    name: str
    category: str
    unit_class: str
    derivation: str  # formula over snake_case value keys, empty if reported directly

    @property
    def value_key(self) -> str:
        return slugify(self.name)


@dataclass(frozen=True)
class MacroEventSubcategory:
    code: str
    category: str
    description: str


@dataclass(frozen=True)
class Threshold:
    quantity: str
    comparator: str
    value: float
    unit: str

    def satisfied_by(self, observed: float) -> bool:
        if self.comparator == ">=":
            return observed >= self.value
        if self.comparator == ">":
            return observed > self.value
        if self.comparator == "<=":
            return observed <= self.value
        if self.comparator == "<":
            return observed < self.value
        return observed == self.value


@dataclass(frozen=True)
class GroundingRule:
    subcategory: str
    economy: str
    authority: str
    trigger: str
    thresholds: tuple[Threshold, ...]


@dataclass(frozen=True)
class CorporateEventType:
    event_id: int
    name: str
    category: str
    subgroup: str


@dataclass(frozen=True)
class ToleranceRule:
    selector_kind: str  # corporate-unit | macro-category
    selector: str
    epsilon: float


@dataclass(frozen=True)
class RegistrySet:
    economies: tuple[Economy, ...]
    indices: tuple[EquityIndex, ...]
    companies: tuple[Company, ...]
    macro_indicators: tuple[MacroIndicatorSpec, ...]
    corporate_metrics: tuple[CorporateMetricSpec, ...]
    subcategories: tuple[MacroEventSubcategory, ...]
    grounding_rules: tuple[GroundingRule, ...]
    corporate_events: tuple[CorporateEventType, ...]
    tolerance_rules: tuple[ToleranceRule, ...]
    _by_economy: dict = field(default_factory=dict, repr=False, compare=False)

    def economy(self, code: str) -> Economy:
        for e in self.economies:
            if e.code == code:
                return e
        raise RegistryError(f"unknown economy code: {code!r}")

    def company(self, identifier: str) -> Company:
        c = self._index("companies", lambda: {x.identifier: x for x in self.companies}).get(identifier)
        if c is None:
            raise RegistryError(f"unknown company: {identifier!r}")
        return c

    def metric(self, metric_id: int) -> CorporateMetricSpec:
        m = self._index("metrics", lambda: {x.metric_id: x for x in self.corporate_metrics}).get(metric_id)
        if m is None:
            raise RegistryError(f"unknown corporate metric id: {metric_id}")
        return m

    def metric_by_name(self, name: str) -> CorporateMetricSpec:
        m = self._index("metric_names", lambda: {x.name: x for x in self.corporate_metrics}).get(name)
        if m is None:
            raise RegistryError(f"unknown corporate metric: {name!r}")
        return m

    def indicator(self, indicator_id: str) -> MacroIndicatorSpec:
        m = self._index("indicators", lambda: {x.indicator_id: x for x in self.macro_indicators}).get(indicator_id)
        if m is None:
            raise RegistryError(f"unknown macro indicator: {indicator_id!r}")
        return m

    def event_type(self, event_id: int) -> CorporateEventType:
        e = self._index("events", lambda: {x.event_id: x for x in self.corporate_events}).get(event_id)
        if e is None:
            raise RegistryError(f"unknown corporate event type: {event_id}")
        return e

    def subcategory(self, code: str) -> MacroEventSubcategory:
        s = self._index("subcats", lambda: {x.code: x for x in self.subcategories}).get(code)
        if s is None:
            raise RegistryError(f"unknown macro event subcategory: {code!r}")
        return s

    def indicators_for(self, economy: str) -> list[MacroIndicatorSpec]:
        """Economy-specific specs plus the two global ones, exclusions applied."""
        if economy not in ECONOMY_CODES:
            raise RegistryError(f"unknown economy code: {economy!r}")
        own = [m for m in self.macro_indicators if m.economy == economy]
        global_ = [m for m in self.macro_indicators if m.economy == GLOBAL_SCOPE]
        return own + global_

    def grounding_for(self, subcategory: str, economy: str) -> GroundingRule:
        self.subcategory(subcategory)
        if economy not in ECONOMY_CODES:
            raise RegistryError(f"unknown economy code: {economy!r}")
        key = (subcategory, economy)
        rule = self._index(
            "grounding", lambda: {(g.subcategory, g.economy): g for g in self.grounding_rules}
        ).get(key)
        if rule is None:
            raise RegistryError(f"no grounding rule for {key}")
        return rule

    def reporting_companies(self, index_name: str) -> list[Company]:
        return [c for c in self.companies if index_name in c.indices]

    def cardinalities(self) -> dict[str, int]:
        return {
            "economies": len(self.economies),
            "indices": len(self.indices),
            "companies": len(self.companies),
            "macro_indicators": len(self.macro_indicators),
            "corporate_metrics": len(self.corporate_metrics),
            "subcategories": len(self.subcategories),
            "grounding_rules": len(self.grounding_rules),
            "corporate_event_types": len(self.corporate_events),
        }

    def _index(self, name, build):
        # lazy lookup caches; RegistrySet content is immutable so this is safe
        if name not in self._by_economy:
            self._by_economy[name] = build()
        return self._by_economy[name]


def slugify(name: str) -> str:
    """Canonical snake_case value key for a metric name.

    'EPS (Basic)' -> 'eps_basic', 'R&D Expense' -> 'r_and_d_expense'.
    """
    s = name.replace("&", " and ")
    s = re.sub(r"[^A-Za-z0-9]+", "_", s)
    return s.strip("_").lower()


def _read_table(path: Path, table: str) -> list[dict[str, str]]:
    if not path.exists():
        raise RegistryError(f"missing registry files: {path.name} not found in {path.parent}")
    rows: list[dict[str, str]] = []
    header: list[str] | None = None
    schema_seen = False
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        if line.startswith("#"):
            m = re.match(r"#\s*schema:\s*(\S+)/(\d+)", line)
            if m:
                if m.group(1) != table:
                    raise RegistryError(
                        f"{path.name}:{lineno}: schema declares table {m.group(1)!r}, expected {table!r}"
                    )
                schema_seen = True
            continue
        cells = line.split("\t")
        if header is None:
            header = cells
            continue
        if len(cells) != len(header):
            raise RegistryError(
                f"{path.name}:{lineno}: expected {len(header)} fields, got {len(cells)}"
            )
        rows.append(dict(zip(header, cells)))
    if not schema_seen:
        raise RegistryError(f"{path.name}: missing schema version header")
    if header is None:
        raise RegistryError(f"{path.name}: no header row")
    return rows


def _parse_thresholds(raw: str, where: str) -> tuple[Threshold, ...]:
    if not raw.strip():
        return ()
    out = []
    for item in raw.split(";"):
        item = item.strip()
        m = re.match(r"(\S+)\s*(>=|<=|==|>|<)\s*(-?[\d.]+)\s*(\S+)", item)
        if m is None:
            raise RegistryError(f"{where}: cannot parse threshold {item!r}")
        cmp_ = m.group(2)
        if cmp_ not in COMPARATORS:
            raise RegistryError(f"{where}: invalid comparator {cmp_!r}")
        out.append(Threshold(m.group(1), cmp_, float(m.group(3)), m.group(4)))
    return tuple(out)


def _require(cond: bool, invariant: str) -> None:
    if not cond:
        raise RegistryError(f"cardinality violation: {invariant}")


def load_registry(path: str | Path | None = None) -> RegistrySet:
    """Load and validate a registry directory; default is the shipped data.

    Raises RegistryError naming the failed invariant, duplicate id, or the
    file and line that failed to parse.
    """
    if path is None:
        path = resources.files("foreval.registry") / "data"
    path = Path(str(path))
    if not path.is_dir():
        raise RegistryError(f"missing registry files: {path} is not a directory")

    econ_rows = _read_table(path / "economies.tsv", "economies")
    economies = tuple(Economy(r["code"], r["name"], int(r["utc_offset"])) for r in econ_rows)
    _require(len(economies) == 8, f"expected 8 economies, got {len(economies)}")
    codes = [e.code for e in economies]
    _require(len(set(codes)) == 8, "economy codes must be unique")
    _require(set(codes) == set(ECONOMY_CODES), f"economy codes must be {ECONOMY_CODES}")

    index_rows = _read_table(path / "indices.tsv", "indices")
    indices = tuple(EquityIndex(r["name"], r["economy"], r["snapshot_date"]) for r in index_rows)
    _require(len(indices) == 9, f"expected 9 indices, got {len(indices)}")
    _require(
        all(i.snapshot_date == "2025-10-02" for i in indices),
        "index snapshot date must be 2025-10-02",
    )
    index_econ = {i.name: i.economy for i in indices}

    comp_rows = _read_table(path / "companies.tsv", "companies")
    companies = []
    seen_ids: set[str] = set()
    for r in comp_rows:
        if r["identifier"] in seen_ids:
            raise RegistryError(f"duplicate company id: {r['identifier']}")
        seen_ids.add(r["identifier"])
        memberships = tuple(x for x in r["indices"].split(";") if x)
        companies.append(Company(r["identifier"], r["name"], r["market"], memberships))
    companies = tuple(companies)
    _require(len(companies) == 1314, f"expected 1,314 companies, got {len(companies)}")
    for c in companies:
        _require(len(c.indices) >= 1, f"company {c.identifier} belongs to no index")
        for ix in c.indices:
            _require(ix in index_econ, f"company {c.identifier} references unknown index {ix!r}")
            _require(
                index_econ[ix] == c.market,
                f"company {c.identifier} market {c.market} != index {ix} economy {index_econ[ix]}",
            )

    macro_rows = _read_table(path / "macro_indicators.tsv", "macro_indicators")
    macro = []
    seen_macro: set[str] = set()
    for r in macro_rows:
        if r["indicator_id"] in seen_macro:
            raise RegistryError(f"duplicate macro indicator id: {r['indicator_id']}")
        seen_macro.add(r["indicator_id"])
        if r["unit_class"] not in MACRO_UNIT_CLASSES:
            raise RegistryError(f"macro indicator {r['indicator_id']}: bad unit class {r['unit_class']!r}")
        if r["cadence"] not in CADENCES:
            raise RegistryError(f"macro indicator {r['indicator_id']}: bad cadence {r['cadence']!r}")
        macro.append(MacroIndicatorSpec(
            r["indicator_id"], r["indicator_type"], r["economy"],
            r["display_name"], r["unit_class"], r["cadence"],
        ))
    macro = tuple(macro)
    _require(len(macro) == 96, f"expected 96 macro indicator specs, got {len(macro)}")
    n_global = sum(1 for m in macro if m.economy == GLOBAL_SCOPE)
    _require(n_global == 2, f"expected 2 global macro specs, got {n_global}")
    _require(
        not any(m.economy == "US" and m.indicator_type == "FX_RATE" for m in macro),
        "US must not ship an FX rate spec",
    )
    _require(
        not any(m.economy == "SG" and m.indicator_type == "RATE_1Y" for m in macro),
        "SG must not ship a 1-year rate spec",
    )

    metric_rows = _read_table(path / "corporate_metrics.tsv", "corporate_metrics")
    metrics = []
    seen_metric: set[int] = set()
    for r in metric_rows:
        mid = int(r["metric_id"])
        if mid in seen_metric:
            raise RegistryError(f"duplicate corporate metric id: {mid}")
        seen_metric.add(mid)
        if r["unit_class"] not in METRIC_UNIT_CLASSES:
            raise RegistryError(f"corporate metric {mid}: bad unit class {r['unit_class']!r}")
        metrics.append(CorporateMetricSpec(mid, r["name"], r["category"], r["unit_class"], r["derivation"]))
    metrics = tuple(metrics)
    _require(len(metrics) == 121, f"expected 121 corporate metrics, got {len(metrics)}")
    _require(
        set(seen_metric) == set(range(1, 122)),
        "corporate metric ids must cover 1..121",
    )
    sizes: dict[str, int] = {}
    for m in metrics:
        sizes[m.category] = sizes.get(m.category, 0) + 1
    _require(
        sizes == EXPECTED_METRIC_CATEGORY_SIZES,
        f"metric category sizes {sizes} != expected {EXPECTED_METRIC_CATEGORY_SIZES}",
    )

    subcat_rows = _read_table(path / "subcategories.tsv", "subcategories")
    subcats = tuple(MacroEventSubcategory(r["code"], r["category"], r["description"]) for r in subcat_rows)
    _require(len(subcats) == 26, f"expected 26 subcategories, got {len(subcats)}")
    _require(len({s.code for s in subcats}) == 26, "subcategory codes must be unique")
    for s in subcats:
        _require(s.category in "ABCDEFGHI" and len(s.category) == 1,
                 f"subcategory {s.code} category {s.category!r} outside A-I")
        _require(s.code[0] == s.category, f"subcategory {s.code} not in its own category")

    ground_rows = _read_table(path / "grounding_rules.tsv", "grounding_rules")
    rules = []
    seen_pairs: set[tuple[str, str]] = set()
    for n, r in enumerate(ground_rows):
        pair = (r["subcategory"], r["economy"])
        if pair in seen_pairs:
            raise RegistryError(f"duplicate grounding rule for {pair}")
        seen_pairs.add(pair)
        rules.append(GroundingRule(
            r["subcategory"], r["economy"], r["authority"], r["trigger"],
            _parse_thresholds(r["thresholds"], f"grounding_rules.tsv row {n + 1}"),
        ))
    rules = tuple(rules)
    _require(len(rules) == 208, f"expected 208 grounding rules (26 x 8), got {len(rules)}")
    for s in subcats:
        n = sum(1 for g in rules if g.subcategory == s.code)
        _require(n == 8, f"subcategory {s.code} has {n} grounding rules, expected 8")

    event_rows = _read_table(path / "corporate_events.tsv", "corporate_events")
    events = []
    seen_event: set[int] = set()
    for r in event_rows:
        eid = int(r["event_id"])
        if eid in seen_event:
            raise RegistryError(f"duplicate corporate event id: {eid}")
        seen_event.add(eid)
        events.append(CorporateEventType(eid, r["name"], r["category"], r["subgroup"]))
    events = tuple(events)
    _require(len(events) == 70, f"expected 70 corporate event types, got {len(events)}")
    _require(set(seen_event) == set(range(1, 71)), "corporate event ids must cover 1..70")
    _require(len({e.category for e in events}) == 8, "corporate events must span 8 categories")

    tol_rows = _read_table(path / "tolerance_rules.tsv", "tolerance_rules")
    tolerances = tuple(
        ToleranceRule(r["selector_kind"], r["selector"], float(r["epsilon"])) for r in tol_rows
    )
    _require(len(tolerances) >= 1, "tolerance table must not be empty")
    kinds = {(t.selector_kind, t.selector) for t in tolerances}
    _require(len(kinds) == len(tolerances), "tolerance selectors must be unique")
    for unit in METRIC_UNIT_CLASSES:
        _require(("corporate-unit", unit) in kinds, f"no tolerance rule for corporate unit {unit!r}")
    _require(("macro-category", "rates-fx") in kinds, "no tolerance rule for macro rates-fx")
    _require(("macro-category", "other") in kinds, "no tolerance rule for other macro indicators")

    return RegistrySet(
        economies=economies,
        indices=indices,
        companies=companies,
        macro_indicators=macro,
        corporate_metrics=metrics,
        subcategories=subcats,
        grounding_rules=rules,
        corporate_events=events,
        tolerance_rules=tolerances,
    )
