"""Registry load, cardinality invariants, and lookups."""
from __future__ import annotations

import pytest

from foreval.registry import RegistryError, load_registry


@pytest.fixture(scope="module")
def registry():
    return load_registry()


def test_shipped_macro_indicator_count(registry):
    assert len(registry.macro_indicators) == 96


def test_global_specs_counted_once(registry):
    assert sum(1 for m in registry.macro_indicators if m.economy == "GLOBAL") == 2
    assert sum(1 for m in registry.macro_indicators if m.economy != "GLOBAL") == 94


def test_grounding_rule_count(registry):
    # 26 subcategories (3+2+3+3+4+3+3+2+3) across 8 economies
    per_cat = {}
    for s in registry.subcategories:
        per_cat[s.category] = per_cat.get(s.category, 0) + 1
    assert per_cat == {"A": 3, "B": 2, "C": 3, "D": 3, "E": 4, "F": 3, "G": 3, "H": 2, "I": 3}
    assert sum(per_cat.values()) == 26
    assert len(registry.grounding_rules) == 26 * 8 == 208


def test_empty_directory_rejected(tmp_path):
    with pytest.raises(RegistryError, match="missing registry files"):
        load_registry(tmp_path)


def test_indicators_for_us_excludes_fx(registry):
    specs = registry.indicators_for("US")
    types = {s.indicator_type for s in specs}
    assert "FX_RATE" not in types
    # 11 economy-specific (12 types minus the FX exclusion) + 2 global
    assert len(specs) == 13


def test_indicators_for_sg_excludes_1y_rate(registry):
    specs = registry.indicators_for("SG")
    assert "RATE_1Y" not in {s.indicator_type for s in specs}
    assert len(specs) == 13


def test_indicators_for_cn_no_exclusion(registry):
    specs = registry.indicators_for("CN")
    assert len(specs) == 14  # 12 economy-specific + 2 global


def test_indicators_for_unknown_code(registry):
    with pytest.raises(RegistryError, match="unknown economy"):
        registry.indicators_for("XX")


def test_indicators_sum_counting_global_once(registry):
    total = set()
    for e in ("US", "CN", "HK", "JP", "UK", "DE", "FR", "SG"):
        total.update(s.indicator_id for s in registry.indicators_for(e))
    assert len(total) == 96


def test_grounding_us_a1(registry):
    rule = registry.grounding_for("A1", "US")
    assert rule.authority == "Federal Reserve (FOMC)"
    bps = [t for t in rule.thresholds if t.unit == "bps"]
    assert any(t.comparator == ">=" and t.value == 25 for t in bps)


def test_grounding_cn_a1(registry):
    rule = registry.grounding_for("A1", "CN")
    assert any(t.comparator == ">=" and t.value == 5 and t.unit == "bps" for t in rule.thresholds)


def test_grounding_unknown_subcategory(registry):
    with pytest.raises(RegistryError, match="unknown macro event subcategory"):
        registry.grounding_for("Z9", "US")


def test_every_subcategory_has_eight_rules(registry):
    counts = {}
    for g in registry.grounding_rules:
        counts[g.subcategory] = counts.get(g.subcategory, 0) + 1
    assert set(counts.values()) == {8}


def test_company_universe(registry):
    assert len(registry.companies) == 1314
    assert len({c.identifier for c in registry.companies}) == 1314
    index_econ = {i.name: i.economy for i in registry.indices}
    for c in registry.companies:
        assert c.indices, c.identifier
        for ix in c.indices:
            assert index_econ[ix] == c.market


def test_index_snapshot_date(registry):
    assert len(registry.indices) == 9
    assert all(i.snapshot_date == "2025-10-02" for i in registry.indices)


def test_metric_category_sizes(registry):
    sizes = {}
    for m in registry.corporate_metrics:
        sizes[m.category] = sizes.get(m.category, 0) + 1
    assert sorted(sizes.values(), reverse=True) == [25, 22, 15, 15, 12, 12, 8, 6, 6]
    assert sum(sizes.values()) == 121


def test_corporate_event_types(registry):
    assert len(registry.corporate_events) == 70
    assert {e.event_id for e in registry.corporate_events} == set(range(1, 71))
    assert len({e.category for e in registry.corporate_events}) == 8
    assert registry.event_type(34).name == "Business Expansions"


def test_load_is_idempotent(registry):
    again = load_registry()
    assert again.economies == registry.economies
    assert again.companies == registry.companies
    assert again.macro_indicators == registry.macro_indicators
    assert again.grounding_rules == registry.grounding_rules
    assert again.tolerance_rules == registry.tolerance_rules


def test_cardinality_violation_names_invariant(tmp_path, registry):
    import shutil
    from importlib import resources

    src = resources.files("foreval.registry") / "data"
    shutil.copytree(str(src), tmp_path / "data")
    # drop one company -> cardinality failure must name the invariant
    companies = (tmp_path / "data" / "companies.tsv").read_text().splitlines()
    (tmp_path / "data" / "companies.tsv").write_text("\n".join(companies[:-1]) + "\n")
    with pytest.raises(RegistryError, match="cardinality violation.*1,314"):
        load_registry(tmp_path / "data")


def test_parse_failure_reports_file_and_line(tmp_path):
    import shutil
    from importlib import resources

    src = resources.files("foreval.registry") / "data"
    shutil.copytree(str(src), tmp_path / "data")
    path = tmp_path / "data" / "economies.tsv"
    lines = path.read_text().splitlines()
    lines[3] = "broken row with no tabs"
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(RegistryError, match=r"economies\.tsv:4"):
        load_registry(tmp_path / "data")


def test_company_ticker_and_lookup(registry):
    c = registry.company("BKNG.OQ")
    assert c.ticker == "BKNG"
    assert c.name == "Booking Holdings Inc"
    assert "S&P 500" in c.indices
    air = registry.company("AI.PA")
    assert air.market == "FR" and "CAC 40" in air.indices
