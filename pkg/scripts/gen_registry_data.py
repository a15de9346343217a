#!/usr/bin/env python3
"""Emit the shipped registry data files (TSV) into src/foreval/registry/data/.

The registry is checked in; this script exists so the tables stay diffable
and regenerable from one place. Company names outside the seeded real
constituents are synthetic but well formed; cardinality and index mapping
are the contract, not the roster.
"""
from __future__ import annotations

import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "src" / "foreval" / "registry" / "data"

ECONOMIES = [
    # code, display name, utc offset hint
    ("US", "United States", -5),
    ("CN", "China", 8),
    ("HK", "Hong Kong", 8),
    ("JP", "Japan", 9),
    ("UK", "United Kingdom", 0),
    ("DE", "Germany", 1),
    ("FR", "France", 1),
    ("SG", "Singapore", 8),
]

INDICES = [
    # name, economy, target constituent count in the shipped snapshot
    ("S&P 500", "US", 500),
    ("NASDAQ 100", "US", 100),
    ("FTSE 100", "UK", 100),
    ("DAX 40", "DE", 40),
    ("CAC 40", "FR", 40),
    ("Nikkei 225", "JP", 225),
    ("CSI 300", "CN", 300),
    ("HSI", "HK", 79),
    ("STI", "SG", 30),
]
SNAPSHOT_DATE = "2025-10-02"

# 14 indicator types: 2 global plus 12 instantiated per economy.
# Expansion: 2 + 12*8 - 2 exclusions = 96 specs.
MACRO_TYPES = [
    # type code, display suffix, unit class, cadence, scope
    ("GSCI", "S&P GSCI COMMODITY", "index", "weekly", "GLOBAL"),
    ("VIX", "CBOE VIX", "index", "weekly", "GLOBAL"),
    ("STOCK_INDEX", "STOCK INDEX", "index", "weekly", "ALL"),
    ("RATE_1Y", "1-YEAR GOVERNMENT BOND YIELD", "rate", "weekly", "EXCL_SG"),
    ("RATE_3M", "TREASURY BILL", "rate", "weekly", "ALL"),
    ("FX_RATE", "EXCHANGE RATE USD", "fx", "weekly", "EXCL_US"),
    ("GDP", "GDP", "level", "quarterly", "ALL"),
    ("CPI", "CPI", "index", "monthly", "ALL"),
    ("PPI", "PPI", "index", "monthly", "ALL"),
    ("UNRATE", "UNEMPLOYMENT RATE", "percentage", "monthly", "ALL"),
    ("HPI", "HOUSE PRICE INDEX", "index", "monthly", "ALL"),
    ("NEER", "NEER", "fx", "monthly", "ALL"),
    ("INTERBANK_3M", "3-MONTH INTERBANK RATE", "rate", "weekly", "ALL"),
    ("CAB", "CURRENT ACCOUNT BALANCE", "level", "quarterly", "ALL"),
]

ECON_UPPER = {
    "US": "UNITED STATES", "CN": "CHINA", "HK": "HONG KONG", "JP": "JAPAN",
    "UK": "UNITED KINGDOM", "DE": "GERMANY", "FR": "FRANCE", "SG": "SINGAPORE",
}

# 121 corporate metrics in 9 categories (25/22/15/15/8/12/12/6/6).
# unit class drives the scoring tolerance; derivation (if any) is a formula
# over snake_case value keys evaluated by the resolver when the metric is
# not reported directly.
M = "million-scale"
P = "percentage"
R = "ratio"
S = "per-share"
C = "count"
CORPORATE_METRICS = [
    # (id, name, category, unit class, derivation)
    (1, "Total Assets", "Balance Sheet", M, ""),
    (2, "Total Liabilities", "Balance Sheet", M, ""),
    (3, "Total Equity", "Balance Sheet", M, ""),
    (4, "Total Current Assets", "Balance Sheet", M, ""),
    (5, "Total Current Liabilities", "Balance Sheet", M, ""),
    (6, "Long Term Debt", "Balance Sheet", M, ""),
    (7, "Short Term Debt", "Balance Sheet", M, ""),
    (8, "Short and Long Term Debt", "Balance Sheet", M,
     "short_term_debt + long_term_debt"),
    (9, "Total Loans", "Balance Sheet", M, ""),
    (10, "Cash and Equivalents", "Balance Sheet", M, ""),
    (11, "Accounts Receivable", "Balance Sheet", M, ""),
    (12, "Inventory", "Balance Sheet", M, ""),
    (13, "Goodwill", "Balance Sheet", M, ""),
    (14, "Accounts Payable", "Balance Sheet", M, ""),
    (15, "Accrued Expenses", "Balance Sheet", M, ""),
    (16, "Deferred Revenue", "Balance Sheet", M, ""),
    (17, "Retained Earnings", "Balance Sheet", M, ""),
    (18, "Treasury Stock", "Balance Sheet", M, ""),
    (19, "Minority Interest", "Balance Sheet", M, ""),
    (20, "Preferred Stock", "Balance Sheet", M, ""),
    (21, "Common Stock", "Balance Sheet", M, ""),
    (22, "Total Deposits", "Balance Sheet", M, ""),
    (23, "Saving Deposits", "Balance Sheet", M, ""),
    (24, "Property Plant and Equipment", "Balance Sheet", M, ""),
    (25, "Intangible Assets", "Balance Sheet", M, ""),
    (26, "Revenue", "Income Statement", M, ""),
    (27, "Cost of Revenue", "Income Statement", M, ""),
    (28, "Gross Profit", "Income Statement", M, "revenue - cost_of_revenue"),
    (29, "Operating Income", "Income Statement", M, ""),
    (30, "EBIT", "Income Statement", M, ""),
    (31, "EBITDA", "Income Statement", M,
     "ebit + depreciation_and_amortization"),
    (32, "Net Income", "Income Statement", M, ""),
    (33, "Interest Expense", "Income Statement", M, ""),
    (34, "R&D Expense", "Income Statement", M, ""),
    (35, "SG&A Expense", "Income Statement", M, ""),
    (36, "Income Tax Expense", "Income Statement", M, ""),
    (37, "Interest Income", "Income Statement", M, ""),
    (38, "Other Income", "Income Statement", M, ""),
    (39, "Extraordinary Items", "Income Statement", M, ""),
    (40, "Discontinued Operations", "Income Statement", M, ""),
    (41, "EPS (Basic)", "Income Statement", S, ""),
    (42, "EPS (Diluted)", "Income Statement", S, ""),
    (43, "Dividends Per Share", "Income Statement", S, ""),
    (44, "Revenue Growth (YoY)", "Income Statement", P, ""),
    (45, "Net Income Growth (YoY)", "Income Statement", P, ""),
    (46, "Operating Expense", "Income Statement", M, ""),
    (47, "Pre-Tax Income", "Income Statement", M, ""),
    (48, "Cash From Operations", "Cash Flow", M, ""),
    (49, "Cash from Investing", "Cash Flow", M, ""),
    (50, "Cash from Financing", "Cash Flow", M, ""),
    (51, "Free Cash Flow", "Cash Flow", M,
     "cash_from_operations - capital_expenditure"),
    (52, "Depreciation and Amortization", "Cash Flow", M, ""),
    (53, "Capital Expenditure", "Cash Flow", M, ""),
    (54, "Acquisitions", "Cash Flow", M, ""),
    (55, "Divestitures", "Cash Flow", M, ""),
    (56, "Debt Repayment", "Cash Flow", M, ""),
    (57, "Debt Issuance", "Cash Flow", M, ""),
    (58, "Stock Repurchase", "Cash Flow", M, ""),
    (59, "Stock Issuance", "Cash Flow", M, ""),
    (60, "Dividend Payments", "Cash Flow", M, ""),
    (61, "Net Change in Cash", "Cash Flow", M, ""),
    (62, "Working Capital Changes", "Cash Flow", M, ""),
    (63, "Return on Assets (ROA)", "Profitability", R,
     "net_income / total_assets"),
    (64, "Return on Equity (ROE)", "Profitability", R,
     "net_income / total_equity"),
    (65, "Return on Invested Capital", "Profitability", R,
     "nopat / invested_capital"),
    (66, "Gross Margin", "Profitability", P, "gross_profit / revenue"),
    (67, "Operating Margin", "Profitability", P, "operating_income / revenue"),
    (68, "EBITDA Margin", "Profitability", P, "ebitda / revenue"),
    (69, "Net Margin", "Profitability", P, "net_income / revenue"),
    (70, "Profit Margin", "Profitability", P,
     "(operating_income - depreciation_and_amortization) / revenue"),
    (71, "Return on Sales", "Profitability", P, "operating_income / revenue"),
    (72, "Cash Return on Assets", "Profitability", R,
     "cash_from_operations / total_assets"),
    (73, "Cash Return on Equity", "Profitability", R,
     "cash_from_operations / total_equity"),
    (74, "NPL Ratio", "Profitability", P,
     "non_performing_loans / total_loans"),
    (75, "Net Interest Margin", "Profitability", P,
     "net_interest_income / earning_assets"),
    (76, "Efficiency Ratio", "Profitability", P,
     "non_interest_expense / revenue"),
    (77, "Cost-to-Income Ratio", "Profitability", P,
     "operating_expense / operating_income"),
    (78, "Current Ratio", "Liquidity", R,
     "total_current_assets / total_current_liabilities"),
    (79, "Quick Ratio", "Liquidity", R,
     "(total_current_assets - inventory) / total_current_liabilities"),
    (80, "Cash Ratio", "Liquidity", R,
     "cash_and_equivalents / total_current_liabilities"),
    (81, "Operating Cash Flow Ratio", "Liquidity", R,
     "cash_from_operations / total_current_liabilities"),
    (82, "Working Capital", "Liquidity", M,
     "total_current_assets - total_current_liabilities"),
    (83, "Working Capital Ratio", "Liquidity", R,
     "(total_current_assets - total_current_liabilities) / total_assets"),
    (84, "Defensive Interval Ratio", "Liquidity", C,
     "liquid_assets / daily_operating_expense"),
    (85, "Cash Conversion Cycle", "Liquidity", C,
     "days_inventory_outstanding + days_sales_outstanding - days_payables_outstanding"),
    (86, "Debt-to-Equity Ratio", "Leverage", R,
     "short_and_long_term_debt / total_equity"),
    (87, "Debt-to-Assets Ratio", "Leverage", R,
     "short_and_long_term_debt / total_assets"),
    (88, "Liability-to-Assets Ratio", "Leverage", R,
     "total_liabilities / total_assets"),
    (89, "Equity Ratio", "Leverage", R, "total_equity / total_assets"),
    (90, "Equity Multiplier", "Leverage", R, "total_assets / total_equity"),
    (91, "Long-term Debt to Equity", "Leverage", R,
     "long_term_debt / total_equity"),
    (92, "Long-term Debt to Assets", "Leverage", R,
     "long_term_debt / total_assets"),
    (93, "ST Debt to Total Debt", "Leverage", R,
     "short_term_debt / short_and_long_term_debt"),
    (94, "Net Debt", "Leverage", M,
     "short_and_long_term_debt - cash_and_equivalents"),
    (95, "Net Debt to Equity", "Leverage", R, "net_debt / total_equity"),
    (96, "Net Debt to EBITDA", "Leverage", R, "net_debt / ebitda"),
    (97, "Financial Leverage", "Leverage", R,
     "average_assets / average_equity"),
    (98, "Asset Turnover", "Efficiency", R, "revenue / total_assets"),
    (99, "Fixed Asset Turnover", "Efficiency", R, "revenue / fixed_assets"),
    (100, "Inventory Turnover", "Efficiency", R,
     "cost_of_revenue / average_inventory"),
    (101, "Receivables Turnover", "Efficiency", R,
     "revenue / average_receivables"),
    (102, "Payables Turnover", "Efficiency", R,
     "cost_of_revenue / average_payables"),
    (103, "Working Capital Turnover", "Efficiency", R,
     "revenue / working_capital"),
    (104, "Equity Turnover", "Efficiency", R, "revenue / total_equity"),
    (105, "Days Inventory Outstanding", "Efficiency", C,
     "365 / inventory_turnover"),
    (106, "Days Sales Outstanding", "Efficiency", C,
     "365 / receivables_turnover"),
    (107, "Days Payables Outstanding", "Efficiency", C,
     "365 / payables_turnover"),
    (108, "Total Loans Growth (YoY)", "Efficiency", P, ""),
    (109, "Deposits Growth (YoY)", "Efficiency", P, ""),
    (110, "Interest Coverage (EBIT)", "Coverage", R,
     "ebit / interest_expense"),
    (111, "Interest Coverage (EBITDA)", "Coverage", R,
     "ebitda / interest_expense"),
    (112, "Interest Coverage (Net Income)", "Coverage", R,
     "net_income / interest_expense"),
    (113, "Interest Coverage (Operating Income)", "Coverage", R,
     "operating_income / interest_expense"),
    (114, "Debt Service Coverage", "Coverage", R,
     "operating_income / debt_service"),
    (115, "Fixed Charge Coverage", "Coverage", R,
     "(ebit + lease_expense) / (interest_expense + lease_expense)"),
    (116, "Book Value Per Share", "Valuation", S,
     "total_equity / shares_outstanding"),
    (117, "Tangible Book Value Per Share", "Valuation", S,
     "tangible_equity / shares_outstanding"),
    (118, "Revenue Per Share", "Valuation", S,
     "revenue / shares_outstanding"),
    (119, "Cash Flow Per Share", "Valuation", S,
     "cash_from_operations / shares_outstanding"),
    (120, "Enterprise Value", "Valuation", M,
     "market_capitalization + short_and_long_term_debt - cash_and_equivalents"),
    (121, "Market Capitalization", "Valuation", M,
     "share_price * shares_outstanding"),
]

# 26 macro event subcategories, MECE across 9 categories A-I.
SUBCATEGORIES = [
    ("A1", "A", "Monetary Policy Shift"),
    ("A2", "A", "Financial Market Liquidity Shock"),
    ("A3", "A", "Macro-prudential Regulation Change"),
    ("B1", "B", "Fiscal Stimulus / Austerity"),
    ("B2", "B", "Sovereign Debt Stress"),
    ("C1", "C", "Trade Policy Change / Sanctions / Tariffs"),
    ("C2", "C", "Currency / FX Pressure Shock"),
    ("C3", "C", "External Financing / Current-Account Shock"),
    ("D1", "D", "Energy Price Shock"),
    ("D2", "D", "Commodity Price Shock"),
    ("D3", "D", "Global Supply Chain Disruption"),
    ("E1", "E", "Industrial Production / Manufacturing Shock"),
    ("E2", "E", "Retail / Consumption / Services Shock"),
    ("E3", "E", "Housing / Real Estate Cycle Shock"),
    ("E4", "E", "Technology, Digital Economy and AI-Driven Industrial Activity"),
    ("F1", "F", "Credit Cycle Shift (Boom/Bust)"),
    ("F2", "F", "Banking System Stress / NPL Shock"),
    ("F3", "F", "Asset Price Shock (Equity/Bond/Volatility)"),
    ("G1", "G", "Climate / Carbon / ESG Policy"),
    ("G2", "G", "Tech/Data/Privacy Regulation"),
    ("G3", "G", "Structural / Institutional Reform"),
    ("H1", "H", "Labour Market Shock"),
    ("H2", "H", "Household Income / Consumption Stress"),
    ("I1", "I", "Conflict / Sanctions Shock"),
    ("I2", "I", "Natural Disaster / Pandemic Shock"),
    ("I3", "I", "Global Financial Contagion"),
]

# Economy-specific grounding rules: (authority, trigger definition, thresholds).
# Threshold encoding: "quantity cmp value unit" items separated by ";".
# Free-text clauses without a clean numeric encoding ship with no threshold
# and fall through to expert judgment in the resolver.
GROUNDING: dict[str, dict[str, tuple[str, str, str]]] = {
    "US": {
        "A1": ("Federal Reserve (FOMC)",
               "Fed funds target range upper bound moves by at least 25 bps, or the statement makes an explicit stance pivot",
               "policy_rate_change_bps >= 25 bps"),
        "A2": ("Fed H.4.1 / NY Fed",
               "FRA-OIS spread above its 95th percentile, or weekly reverse repo usage jumps by more than 500 billion USD",
               "fra_ois_spread_pctile > 95 percentile; reverse_repo_surge_bn > 500 usd_bn"),
        "A3": ("Fed Board / FDIC",
               "New bank capital rules implemented or CCAR stress scenarios changed", ""),
        "B1": ("CBO / White House",
               "Spending legislation passes with discretionary impact of at least 1% of GDP",
               "fiscal_impulse_pct_gdp >= 1 pct"),
        "B2": ("Treasury / CDS Market",
               "5Y sovereign CDS spread above 50 bps, or debt-limit extraordinary measures exhaust within 30 days",
               "sovereign_cds_5y_bps > 50 bps"),
        "C1": ("USTR / Dept. of Commerce",
               "New Section 301 tariffs or export controls implemented against key sectors", ""),
        "C2": ("Treasury / Fed",
               "Trade-weighted dollar index moves at least 10% within 3 months",
               "dxy_move_pct_3m >= 10 pct"),
        "C3": ("BEA",
               "Current account deficit widens by more than 2% of GDP YoY, or net foreign outflows beyond 2 sigma",
               "cab_widening_pct_gdp > 2 pct"),
        "D1": ("EIA",
               "WTI crude or Henry Hub spot changes at least 30% over 6 months",
               "energy_price_change_pct_6m >= 30 pct"),
        "D2": ("USDA / USGS",
               "Key agricultural or metal prices deviate at least 25% from the 6-month moving average",
               "commodity_dev_pct_6mma >= 25 pct"),
        "D3": ("Fed NY / Census",
               "Global supply chain pressure index beyond 2 standard deviations",
               "gscpi_sigma > 2 sigma"),
        "E1": ("Fed Board (G.17)",
               "Industrial production contracts at least 3% YoY for 2 consecutive months",
               "indpro_contraction_pct_yoy >= 3 pct"),
        "E2": ("Census Bureau",
               "Retail sales ex-auto contract at least 2% YoY, or consumer sentiment hits bottom decile",
               "retail_contraction_pct_yoy >= 2 pct"),
        "E3": ("FHFA / S&P CoreLogic",
               "National home price index turns negative YoY, or housing starts fall at least 20% YoY",
               "housing_starts_drop_pct_yoy >= 20 pct"),
        "E4": ("BEA / Congress",
               "Tech value-add deviates 2 sigma from trend, or a major industrial policy bill passes",
               "tech_value_add_sigma >= 2 sigma"),
        "F1": ("Fed Board / BIS",
               "Private credit-to-GDP gap above +10% (boom) or below -5% (bust)",
               "credit_gap_pct > 10 pct"),
        "F2": ("FDIC / Fed",
               "Insured-institution NPL ratio rises at least 1.0%, or a SIFI bank fails or is rescued",
               "npl_rise_pct >= 1.0 pct"),
        "F3": ("NYSE / Nasdaq",
               "S&P 500 or Nasdaq 100 drawdown of at least 20% from peak",
               "drawdown_pct >= 20 pct"),
        "G1": ("EPA / Congress",
               "Major climate legislation passes or new climate disclosure mandates issued", ""),
        "G2": ("FTC / FCC",
               "Major antitrust suit filed against big tech, or new federal privacy executive orders", ""),
        "G3": ("Congress",
               "Major reform of social security, healthcare, or immigration law enacted", ""),
        "H1": ("BLS",
               "Unemployment rate changes at least 0.5%, or payrolls deviate more than 50k from consensus",
               "unrate_change_pct >= 0.5 pct; payrolls_surprise_k > 50 thousand"),
        "H2": ("BEA",
               "Real disposable personal income contracts at least 2% YoY",
               "real_income_contraction_pct_yoy >= 2 pct"),
        "I1": ("Dept. of State / OFAC",
               "US enters armed conflict, or major sanctions designated on a G20 economy", ""),
        "I2": ("FEMA / CDC",
               "Disaster declaration above 10 billion USD, or nationwide public health emergency",
               "disaster_cost_bn > 10 usd_bn"),
        "I3": ("Treasury / Fed",
               "VIX above 35 together with net foreign selling of Treasuries",
               "vix_level > 35 index"),
    },
    "CN": {
        "A1": ("PBoC (Central Bank)",
               "7-day reverse repo or 1-year MLF rate moves by at least 5 bps, or RRR cut of at least 25 bps",
               "policy_rate_change_bps >= 5 bps; rrr_cut_bps >= 25 bps"),
        "A2": ("CFETS / NIFC",
               "DR007 deviates more than 50 bps from the policy rate for 5+ days, or weekly net injection above CNY 500B",
               "dr007_dev_bps > 50 bps"),
        "A3": ("PBoC / NFRA",
               "MPA parameters adjusted, or property-sector leverage metrics changed", ""),
        "B1": ("State Council / MOF",
               "Ultra-long special sovereign bonds issued, or special bond quota raised above CNY 1T",
               "special_bond_quota_tn > 1 cny_tn"),
        "B2": ("MOF / Market Data",
               "10-year CGB yield jumps at least 20 bps in a month, or a major LGFV bond default",
               "cgb_yield_spike_bps >= 20 bps"),
        "C1": ("MOFCOM / Customs",
               "Export controls on strategic materials, or new tariffs on major trading partners", ""),
        "C2": ("SAFE / PBoC",
               "USD/CNY fixing deviates more than 500 pips from market close, or FX reserves drop above 50B USD a month",
               "fixing_dev_pips > 500 pips; fx_reserve_drop_bn > 50 usd_bn"),
        "C3": ("SAFE",
               "Capital account net outflows above 2% of GDP annualized, or major cross-border flow restrictions",
               "outflows_pct_gdp > 2 pct"),
        "D1": ("NDRC / NEA",
               "Guided retail fuel prices adjusted, or thermal coal spot above the regulated cap", ""),
        "D2": ("DCE / SHFE",
               "Iron ore or rebar futures deviate at least 20% from the 6-month moving average",
               "commodity_dev_pct_6mma >= 20 pct"),
        "D3": ("MOT / Caixin",
               "Manufacturing PMI suppliers' delivery times sub-index below 45.0",
               "delivery_subindex < 45.0 index"),
        "E1": ("NBS / Caixin",
               "Official or Caixin manufacturing PMI below 50.0 for 2 consecutive months",
               "pmi_level < 50.0 index"),
        "E2": ("NBS",
               "Retail sales growth turns negative YoY, or youth unemployment above 20%",
               "youth_unrate_pct > 20 pct"),
        "E3": ("NBS / MOHURD",
               "70-city new home price index declines YoY, or top-100 developer sales fall at least 20% YoY",
               "developer_sales_drop_pct_yoy >= 20 pct"),
        "E4": ("MIIT / NDRC",
               "Major strategic projects launched, or strategic industries value-add 2 sigma above trend",
               "strategic_value_add_sigma >= 2 sigma"),
        "F1": ("PBoC",
               "TSF growth gap versus nominal GDP growth of at least 5% in either direction",
               "tsf_gdp_gap_pct >= 5 pct"),
        "F2": ("NFRA / PBoC",
               "Takeover or resolution of a medium-sized bank, or commercial bank NPL ratio rises at least 0.5%",
               "npl_rise_pct >= 0.5 pct"),
        "F3": ("SSE / SZSE",
               "CSI 300 drawdown of at least 20%, or market-wide trading curbs triggered",
               "drawdown_pct >= 20 pct"),
        "G1": ("NDRC / MEE",
               "Dual-carbon policy documents issued, or new national carbon market trading rules", ""),
        "G2": ("CAC / SAMR",
               "New anti-monopoly penalties on platform firms, or a cybersecurity review of major data handlers", ""),
        "G3": ("CPC Central Comm.",
               "Major reforms announced at a plenary session or the Two Sessions", ""),
        "H1": ("NBS",
               "Surveyed urban unemployment rises at least 0.5%, or migrant worker population contracts YoY",
               "unrate_change_pct >= 0.5 pct"),
        "H2": ("NBS / PBoC",
               "Household deposits surge above CNY 5T YoY, or household leverage ratio declines",
               "deposit_surge_tn > 5 cny_tn"),
        "I1": ("MFA / CMC",
               "Escalation in the Taiwan Strait or South China Sea with military exercises, or foreign sanctions on Chinese entities", ""),
        "I2": ("NHC / MEM",
               "Level-I public health emergency response, or a disaster affecting more than 1% of arable land",
               "arable_land_affected_pct > 1 pct"),
        "I3": ("PBoC",
               "Stock Connect / Bond Connect net outflows beyond the historical 99th percentile",
               "connect_outflow_pctile > 99 percentile"),
    },
    "HK": {
        "A1": ("HKMA",
               "Base rate moves by at least 25 bps under the LERS peg, or countercyclical buffer adjusted",
               "policy_rate_change_bps >= 25 bps"),
        "A2": ("HKMA",
               "HIBOR-SOFR spread widens more than 50 bps, or aggregate balance drops below HKD 50B",
               "hibor_spread_bps > 50 bps"),
        "A3": ("HKMA",
               "New LTV caps on residential mortgages, or stress-test assumption changes", ""),
        "B1": ("FSTB",
               "Budget announces relief measures above HKD 50B, or consumption voucher programme",
               "package_size_bn > 50 hkd_bn"),
        "B2": ("FSTB / Rating Agencies",
               "Sovereign rating outlook downgrade, or fiscal reserves fall below 12 months of spending", ""),
        "C1": ("TID",
               "Export control alignment affecting re-export trade, or removal of separate customs treatment", ""),
        "C2": ("HKMA",
               "HKD trades at the weak-side convertibility undertaking with repeated interventions, or USD peg band pressure",
               "peg_interventions_count >= 3 count"),
        "C3": ("C&SD",
               "Current account surplus narrows by more than 2% of GDP YoY",
               "cab_narrowing_pct_gdp > 2 pct"),
        "D1": ("EMSD / CLP",
               "Electricity tariff adjustment of at least 10%, or fuel clause surcharge spike",
               "tariff_change_pct >= 10 pct"),
        "D2": ("C&SD",
               "Food price inflation above 5% YoY",
               "food_cpi_pct_yoy > 5 pct"),
        "D3": ("HK Maritime / MPA",
               "Container throughput contracts at least 10% YoY, or major port disruption",
               "throughput_drop_pct_yoy >= 10 pct"),
        "E1": ("C&SD",
               "Industrial production contracts at least 3% YoY, or PMI below 50 for 2 months",
               "pmi_level < 50.0 index"),
        "E2": ("C&SD",
               "Retail sales value contracts at least 5% YoY, or visitor arrivals drop sharply",
               "retail_contraction_pct_yoy >= 5 pct"),
        "E3": ("RVD / Centaline",
               "Residential price index falls at least 10% from peak, or negative-equity cases surge",
               "home_price_drop_pct >= 10 pct"),
        "E4": ("ITIB / Cyberport",
               "Major tech-hub investment programme launched, or stablecoin/virtual-asset licensing regime changes", ""),
        "F1": ("HKMA",
               "Credit-to-GDP gap above 10%, or loan growth turns negative YoY",
               "credit_gap_pct > 10 pct"),
        "F2": ("HKMA",
               "Local bank NPL ratio rises at least 0.5%, or mainland-exposure impairments surge",
               "npl_rise_pct >= 0.5 pct"),
        "F3": ("HKEX",
               "Hang Seng Index drawdown of at least 20%, or volatility index spikes above 35",
               "drawdown_pct >= 20 pct"),
        "G1": ("EEB",
               "Carbon-neutrality roadmap measures enacted, or mandatory climate disclosures for listcos", ""),
        "G2": ("PCPD / OGCIO",
               "Personal data ordinance amendments enforced, or cross-border data flow rules tightened", ""),
        "G3": ("LegCo",
               "Major reform of MPF, land supply, or immigration schemes enacted", ""),
        "H1": ("C&SD",
               "Unemployment rate rises at least 0.5%, or labour force contracts YoY",
               "unrate_change_pct >= 0.5 pct"),
        "H2": ("C&SD",
               "Real wage index contracts YoY, or household debt service ratio deteriorates sharply", ""),
        "I1": ("HKSAR Gov / OFAC",
               "New foreign sanctions affecting Hong Kong entities, or major geopolitical measures on the financial hub", ""),
        "I2": ("HKO / CHP",
               "Typhoon signal 10 or rainstorm damage above HKD 10B, or epidemic response level raised to emergency",
               "disaster_cost_bn > 10 hkd_bn"),
        "I3": ("HKMA",
               "Southbound/northbound flows reverse beyond the 99th percentile, or offshore CNH funding squeeze",
               "flow_reversal_pctile > 99 percentile"),
    },
    "JP": {
        "A1": ("Bank of Japan (BoJ)",
               "Policy rate moves by at least 10 bps, or the yield-curve-control band is modified",
               "policy_rate_change_bps >= 10 bps"),
        "A2": ("BoJ / JSDA",
               "10-year JGB yield breaches the reference band ceiling, or bond purchase operations step up sharply", ""),
        "A3": ("BoJ / JFSA",
               "ETF/J-REIT purchase guidelines changed, or regional-bank property lending measures", ""),
        "B1": ("Cabinet Office / MoF",
               "Supplementary budget above JPY 10T approved, or a new economic package announced",
               "package_size_tn > 10 jpy_tn"),
        "B2": ("MoF",
               "Debt service costs rise materially in budget projections, or a sovereign outlook downgrade", ""),
        "C1": ("METI",
               "Export restrictions on strategic tech materials, or trade white-list removal", ""),
        "C2": ("MoF / BoJ",
               "Confirmed FX intervention, or USD/JPY moves at least 3% in one week",
               "fx_move_pct_week >= 3 pct"),
        "C3": ("MoF",
               "Current account surplus narrows sharply or turns to deficit", ""),
        "D1": ("METI / TEPCO",
               "Nuclear restarts approved, or utility rate hike requests above 10%",
               "tariff_change_pct > 10 pct"),
        "D2": ("MAFF",
               "Food price index within CPI rises at least 5% YoY, or fuel/wheat subsidies triggered",
               "food_cpi_pct_yoy >= 5 pct"),
        "D3": ("METI / Toyota",
               "Major automaker production halt on parts shortages, or semiconductor supply disruption", ""),
        "E1": ("BoJ (Tankan)",
               "Tankan large manufacturers DI falls at least 5 points, or industrial production contracts at least 2% MoM",
               "tankan_di_drop_points >= 5 points; indpro_contraction_pct_mom >= 2 pct"),
        "E2": ("Cabinet Office",
               "Two consecutive quarters of real GDP contraction, or consumer confidence drops sharply", ""),
        "E3": ("MLIT",
               "Official land prices decline YoY in major metro areas, or Tokyo condo prices correct", ""),
        "E4": ("METI",
               "Strategic sector subsidies announced, or national AI strategy guidelines released", ""),
        "F1": ("BoJ",
               "Bank lending growth deviates sharply from trend, or bankruptcy liabilities surge", ""),
        "F2": ("JFSA / BoJ",
               "Regional bank merger or recapitalization prompted by the regulator, or large securities losses surface", ""),
        "F3": ("TSE / JPX",
               "Nikkei 225 or TOPIX drops at least 20% from peak, or the volatility index spikes above 30",
               "drawdown_pct >= 20 pct; vol_index_level > 30 index"),
        "G1": ("METI / MoE",
               "Green transformation act implementation, or carbon pricing introduction", ""),
        "G2": ("PPC / METI",
               "Stricter personal data rules enforced, or new generative-AI regulations", ""),
        "G3": ("Cabinet Office",
               "New capitalism policy initiatives, or major labour law revisions", ""),
        "H1": ("Rengo / MHLW",
               "Spring wage negotiations agree hikes above 3%, or the job openings ratio drops",
               "wage_hike_pct > 3 pct"),
        "H2": ("MHLW / MIC",
               "Real cash earnings contract YoY, or household spending drops YoY", ""),
        "I1": ("MoFA / MoD",
               "Major security incident near disputed islands, or missile launches triggering national alerts", ""),
        "I2": ("Cabinet Office",
               "Megaquake warning issued, or disaster damage above JPY 1T",
               "disaster_cost_tn > 1 jpy_tn"),
        "I3": ("BoJ",
               "Offshore funding premium re-emerges, or a massive carry-trade unwind", ""),
    },
    "UK": {
        "A1": ("BoE (MPC)",
               "Bank Rate moves by at least 25 bps, or the MPC vote split shifts to signal a pivot, or active gilt sales",
               "policy_rate_change_bps >= 25 bps"),
        "A2": ("BoE / SONIA",
               "SONIA-Bank Rate spread widens more than 20 bps, or gilt repo market dislocation",
               "sonia_spread_bps > 20 bps"),
        "A3": ("BoE (FPC)",
               "Countercyclical capital buffer adjusted, or LDI fund leverage rules intervention", ""),
        "B1": ("HM Treasury / OBR",
               "Budget statement with discretionary measures above GBP 15B, or a fiscal sustainability warning",
               "package_size_bn > 15 gbp_bn"),
        "B2": ("DMO / Markets",
               "10-year gilt yield jumps at least 30 bps in a week, or auction cover below 1.5",
               "gilt_yield_spike_bps >= 30 bps; bid_to_cover < 1.5 ratio"),
        "C1": ("Dept. for Business",
               "New post-Brexit border checks causing delays, or trade framework rule changes", ""),
        "C2": ("BoE / Markets",
               "GBP/USD moves at least 3% in a week, or the trade-weighted index drops sharply",
               "fx_move_pct_week >= 3 pct"),
        "C3": ("ONS",
               "Current account deficit above 5% of GDP",
               "cab_deficit_pct_gdp > 5 pct"),
        "D1": ("OFGEM",
               "Energy price cap adjustment beyond 10% in either direction, or a price guarantee activation",
               "price_cap_change_pct > 10 pct"),
        "D2": ("DEFRA / ONS",
               "Food CPI inflation above 10% YoY",
               "food_cpi_pct_yoy > 10 pct"),
        "D3": ("CBI / ONS",
               "Factors-limiting-output survey readings spike above the historical average", ""),
        "E1": ("ONS",
               "Monthly GDP growth turns negative on a 3m/3m basis, or services PMI below 50",
               "services_pmi < 50.0 index"),
        "E2": ("ONS / GfK",
               "Consumer confidence below -30, or retail volumes contract YoY",
               "consumer_confidence < -30 index"),
        "E3": ("Halifax / Nationwide",
               "House price index falls YoY, or mortgage approvals below 50k a month",
               "mortgage_approvals_k < 50 thousand"),
        "E4": ("DSIT",
               "AI safety institute initiatives, or major life-sciences/tech hub investment", ""),
        "F1": ("BoE",
               "Net mortgage lending turns negative, or consumer credit growth surges on distress borrowing", ""),
        "F2": ("BoE / PRA",
               "Stress among challenger banks, or corporate insolvencies above the historical average", ""),
        "F3": ("LSE / FTSE",
               "FTSE 250 drops at least 15%, or corporate bond spreads widen sharply",
               "drawdown_pct >= 15 pct"),
        "G1": ("DESNZ",
               "Net-zero timeline changes, or windfall tax changes on energy firms", ""),
        "G2": ("CMA",
               "Major tech merger blocked, or new digital markets enforcement", ""),
        "G3": ("UK Parliament",
               "Major renters' reform or immigration legislation passes", ""),
        "H1": ("ONS",
               "Private-sector regular pay growth above 6%, or claimant count rises",
               "wage_growth_pct > 6 pct"),
        "H2": ("ONS",
               "Real household disposable income per head falls for 2 consecutive quarters", ""),
        "I1": ("FCDO",
               "UK military involvement overseas, or a major diplomatic rift affecting trade cooperation", ""),
        "I2": ("Cabinet Office",
               "National risk register event activation, or pandemic-level restrictions", ""),
        "I3": ("BoE",
               "Flash crash in sterling assets, or systemic margin calls in pension fund strategies", ""),
    },
    "DE": {
        "A1": ("ECB (Governing Council)",
               "Deposit facility rate moves by at least 25 bps, or a new asset purchase programme to cap spreads",
               "policy_rate_change_bps >= 25 bps"),
        "A2": ("Bundesbank / ECB",
               "Target2 imbalances widen significantly, or Euribor-OIS spread above 20 bps",
               "euribor_ois_bps > 20 bps"),
        "A3": ("BaFin / Bundesbank",
               "Countercyclical buffer activation for German banks, or strict mortgage LTV caps", ""),
        "B1": ("BMF / Bundestag",
               "Debt-brake suspension confirmed, or a special fund above EUR 50B announced",
               "package_size_bn > 50 eur_bn"),
        "B2": ("Finanzagentur",
               "10-year Bund yield jumps at least 30 bps, or Bund-BTP spread above 250 bps",
               "bund_yield_spike_bps >= 30 bps; bund_btp_spread_bps > 250 bps"),
        "C1": ("BMWK / EU Commission",
               "New EU tariffs hitting the auto sector, or dual-use export controls on major partners", ""),
        "C2": ("ECB / Markets",
               "EUR/USD moves at least 3% in a week, or the euro NEER drops sharply",
               "fx_move_pct_week >= 3 pct"),
        "C3": ("Destatis / Bundesbank",
               "Current account surplus drops below 2% of GDP",
               "cab_surplus_pct_gdp < 2 pct"),
        "D1": ("Bundesnetzagentur",
               "TTF gas price jumps at least 30%, or a gas emergency plan level 2/3 declaration",
               "gas_price_spike_pct >= 30 pct"),
        "D2": ("Destatis",
               "PPI energy component rises at least 20% YoY",
               "ppi_energy_pct_yoy >= 20 pct"),
        "D3": ("Ifo Institute",
               "Material shortages indicator above 50% of surveyed firms",
               "material_shortage_pct > 50 pct"),
        "E1": ("Ifo Institute / Destatis",
               "Business climate index falls for 3 consecutive months, or auto-sector output contracts at least 5% YoY",
               "auto_output_contraction_pct_yoy >= 5 pct"),
        "E2": ("GfK",
               "Consumer climate below -20 points, or real retail sales contract YoY",
               "consumer_climate < -20 index"),
        "E3": ("Destatis / Bulwiengesa",
               "Residential property prices contract YoY, or building permits fall at least 20% YoY",
               "permits_drop_pct_yoy >= 20 pct"),
        "E4": ("BMWK",
               "Major chip-fab or hydrogen-network subsidies above EUR 10B announced",
               "subsidy_size_bn > 10 eur_bn"),
        "F1": ("Bundesbank",
               "Corporate lending contracts YoY, or the lending survey shows severe tightening", ""),
        "F2": ("BaFin",
               "Distress in the Landesbanken sector, or commercial real estate NPL ratios rise significantly", ""),
        "F3": ("Deutsche Börse",
               "DAX 40 drops at least 20%, or the volatility index spikes above 35",
               "drawdown_pct >= 20 pct; vol_index_level > 35 index"),
        "G1": ("BMWK",
               "Heating law implementation, or a carbon price hike above EUR 10 per ton",
               "carbon_price_hike_eur > 10 eur_per_ton"),
        "G2": ("Bundeskartellamt",
               "Major merger blocked, or digital services act penalties enforced on platforms", ""),
        "G3": ("Bundestag",
               "Government coalition collapse, or a major growth-opportunities act passes", ""),
        "H1": ("Bundesagentur für Arbeit",
               "Short-time work notifications above 100k a month, or unemployment rises at least 0.5%",
               "kurzarbeit_notifications_k > 100 thousand; unrate_change_pct >= 0.5 pct"),
        "H2": ("Destatis",
               "Real wages contract YoY for 2 consecutive quarters", ""),
        "I1": ("Auswärtiges Amt",
               "Critical energy infrastructure disruption, or a defense fund above EUR 100B",
               "defense_fund_bn > 100 eur_bn"),
        "I2": ("BBK",
               "Critical infrastructure warning activation, or Rhine levels below the critical shipping mark", ""),
        "I3": ("ECB / Bundesbank",
               "Core-periphery spreads above 250 bps triggering ECB intervention",
               "bund_btp_spread_bps > 250 bps"),
    },
    "FR": {
        "A1": ("ECB / BdF",
               "Deposit facility rate moves by at least 25 bps, or central bank guidance deviates from consensus",
               "policy_rate_change_bps >= 25 bps"),
        "A2": ("BdF / Euronext",
               "3-month Euribor-OIS spread above 20 bps, or repo fragmentation for French collateral",
               "euribor_ois_bps > 20 bps"),
        "A3": ("HCSF / BdF",
               "Countercyclical buffer adjusted, or a strict 35% debt-service-to-income cap enforced",
               "dsti_cap_pct <= 35 pct"),
        "B1": ("Ministry of Economy / Parliament",
               "Budget law forced through without a vote, or deficit beyond the 3% Maastricht limit",
               "deficit_pct_gdp > 3 pct"),
        "B2": ("AFT / Markets",
               "10-year OAT yield jumps at least 30 bps, or OAT-Bund spread above 50 bps",
               "oat_yield_spike_bps >= 30 bps; oat_bund_spread_bps > 50 bps"),
        "C1": ("Customs / EU",
               "Carbon border adjustment implementation affecting industry, or luxury-sector trade disputes", ""),
        "C2": ("BdF / Markets",
               "EUR/USD volatility above 15% annualized, or real exchange-rate appreciation hurting exports",
               "fx_vol_pct_annualized > 15 pct"),
        "C3": ("BdF",
               "Current account deficit widens by more than EUR 10B in a quarter",
               "cab_widening_bn > 10 eur_bn"),
        "D1": ("CRE / EDF",
               "Nuclear output below 280 TWh a year, or the tariff shield cap adjusted",
               "nuclear_output_twh < 280 twh"),
        "D2": ("INSEE",
               "Food CPI inflation above 10% YoY",
               "food_cpi_pct_yoy > 10 pct"),
        "D3": ("BdF / INSEE",
               "Supply difficulties sub-index of the business sentiment survey rises significantly", ""),
        "E1": ("INSEE",
               "Manufacturing output contracts at least 1% MoM, or business climate below the 100 average",
               "mfg_contraction_pct_mom >= 1 pct; business_climate < 100 index"),
        "E2": ("INSEE",
               "Consumer confidence below 85, or household goods consumption contracts YoY",
               "consumer_confidence < 85 index"),
        "E3": ("Notaires de France / INSEE",
               "Existing home prices fall YoY, or housing starts fall at least 15% YoY",
               "housing_starts_drop_pct_yoy >= 15 pct"),
        "E4": ("Ministry of Economy",
               "National investment plan disbursements accelerate, or major gigafactory subsidies", ""),
        "F1": ("BdF",
               "Corporate credit growth below 2% YoY, or state-guaranteed loan defaults rise",
               "credit_growth_pct_yoy < 2 pct"),
        "F2": ("ACPR / BdF",
               "Bancassurance solvency ratios drop, or life-insurance withdrawals surge", ""),
        "F3": ("Euronext Paris",
               "CAC 40 drops at least 20%, or the luxury sub-sector corrects at least 15%",
               "drawdown_pct >= 20 pct"),
        "G1": ("Ministry of Ecology",
               "Energy-performance rental bans extended, or a carbon tax increase", ""),
        "G2": ("CNIL",
               "Major privacy fine against a tech firm, or new influencer-regulation enforcement", ""),
        "G3": ("Parliament / President",
               "Pension reform raising the retirement age, or unemployment insurance reform decrees", ""),
        "H1": ("DARES / Unions",
               "General strike disrupting transport or refineries for more than 3 days, or private payrolls contract",
               "strike_days > 3 days"),
        "H2": ("INSEE",
               "Purchasing power per unit contracts YoY, or an automatic minimum-wage adjustment above 2%",
               "smic_adjustment_pct > 2 pct"),
        "I1": ("Ministry of Foreign Affairs",
               "Direct military intervention, or the terror alert raised to its highest level", ""),
        "I2": ("Ministry of Interior",
               "Civil unrest with nationwide damage above EUR 1B, or drought restrictions hitting agriculture",
               "damage_bn > 1 eur_bn"),
        "I3": ("BdF / ECB",
               "OAT-Bund spread widening above 80 bps triggering ECB intervention",
               "oat_bund_spread_bps > 80 bps"),
    },
    "SG": {
        "A1": ("MAS",
               "S$NEER policy band tightened via slope, width, or re-centering, or an off-cycle policy statement",
               ""),
        "A2": ("MAS / ABS",
               "SORA spikes more than 50 bps in a week, or SGD liquidity facility usage surges",
               "sora_spike_bps > 50 bps"),
        "A3": ("MAS",
               "Total debt servicing ratio threshold tightened, or LTV limits reduced",
               "tdsr_cap_pct <= 55 pct"),
        "B1": ("MOF",
               "Budget support package above SGD 5B, or broad voucher distribution",
               "package_size_bn > 5 sgd_bn"),
        "B2": ("MOF / Yield Curve",
               "Government securities yield curve inverts significantly, or projected investment returns contribution drops", ""),
        "C1": ("Enterprise SG",
               "Non-oil domestic exports contract at least 10% YoY, or major port disruption",
               "nodx_contraction_pct_yoy >= 10 pct"),
        "C2": ("MAS",
               "S$NEER reaches the edge of the policy band, or local-USD rate spreads widen sharply", ""),
        "C3": ("MTI",
               "Balance of payments deficit on capital outflows, or official reserves drop significantly", ""),
        "D1": ("SP Group / EMA",
               "Electricity tariff adjustment of at least 10% QoQ, or fuel stockpile activation",
               "tariff_change_pct_qoq >= 10 pct"),
        "D2": ("MTI / DOS",
               "Core inflation above 5% YoY",
               "core_inflation_pct_yoy > 5 pct"),
        "D3": ("PSA / MPA",
               "Container throughput contracts YoY, or bunker fuel spikes disrupting the shipping hub", ""),
        "E1": ("EDB",
               "Electronics-cluster output contracts at least 10% YoY, or PMI below 50",
               "electronics_contraction_pct_yoy >= 10 pct; pmi_level < 50.0 index"),
        "E2": ("DOS",
               "Retail sales ex-motor contract YoY, or food-services index drops significantly", ""),
        "E3": ("URA / HDB",
               "Private property price index rises more than 2% QoQ triggering cooling measures, or resale prices surge",
               "property_price_rise_pct_qoq > 2 pct"),
        "E4": ("EDB / MAS",
               "Major semiconductor or biomed FDI announcement, or new fintech sandbox grants", ""),
        "F1": ("MAS",
               "Credit-to-GDP gap above 10%, or domestic non-bank loan growth turns negative",
               "credit_gap_pct > 10 pct"),
        "F2": ("MAS",
               "Local bank NPL ratio rises at least 0.5%, or significant regional default exposure",
               "npl_rise_pct >= 0.5 pct"),
        "F3": ("SGX",
               "Straits Times Index drops at least 15%, or turnover falls below the 10-year average",
               "drawdown_pct >= 15 pct"),
        "G1": ("MSE / NCCS",
               "Carbon tax hike milestones reached, or mandatory climate reporting for listed companies",
               "carbon_tax_sgd_per_ton >= 25 sgd_per_ton"),
        "G2": ("MAS",
               "Updated technology risk management guidelines, or major enforcement on digital token providers", ""),
        "G3": ("Parliament",
               "CPF contribution or retirement age changes, or employment pass criteria tightened", ""),
        "H1": ("MOM",
               "Retrenchments above 5,000 a quarter, or unemployment rises at least 0.5%",
               "retrenchments_per_quarter > 5000 count; unrate_change_pct >= 0.5 pct"),
        "H2": ("MOM / NWC",
               "Real median income growth turns negative, or a wage freeze recommendation", ""),
        "I1": ("MFA",
               "Geopolitical tension in the Malacca Strait affecting trade, or sanctions hitting the transshipment role", ""),
        "I2": ("MOH / NEA",
               "Outbreak response raised to orange/red, or haze PSI above 300",
               "psi_level > 300 index"),
        "I3": ("MAS",
               "S$NEER falls below the band midpoint despite tightening, or SGD funding costs spike", ""),
    },
}

# 70 corporate event types; category collapses the three Financial subgroups.
CORPORATE_EVENTS = [
    (1, "Executive Changes - CEO", "Corporate Structure", "Corporate Structure"),
    (2, "Executive Changes - CFO", "Corporate Structure", "Corporate Structure"),
    (3, "Executive/Board - Other", "Corporate Structure", "Corporate Structure"),
    (4, "Name Changes", "Corporate Structure", "Corporate Structure"),
    (5, "Address Changes", "Corporate Structure", "Corporate Structure"),
    (6, "Legal Structure Changes", "Corporate Structure", "Corporate Structure"),
    (7, "Business Reorganizations", "Corporate Structure", "Corporate Structure"),
    (8, "Fiscal Year End Changes", "Corporate Structure", "Corporate Structure"),
    (9, "Announcements of Earnings", "Financial", "Results & Guidance"),
    (10, "Announcement of Operating Results", "Financial", "Results & Guidance"),
    (11, "Announcements of Sales", "Financial", "Results & Guidance"),
    (12, "Guidance - Lowered", "Financial", "Results & Guidance"),
    (13, "Guidance - Raised", "Financial", "Results & Guidance"),
    (14, "Guidance - New/Confirmed", "Financial", "Results & Guidance"),
    (15, "Guidance - Unusual Events", "Financial", "Results & Guidance"),
    (16, "Restatements of Results", "Financial", "Results & Guidance"),
    (17, "Impairments/Write Offs", "Financial", "Results & Guidance"),
    (18, "Dividend Affirmations", "Financial", "Dividends"),
    (19, "Dividend Increases", "Financial", "Dividends"),
    (20, "Dividend Decreases", "Financial", "Dividends"),
    (21, "Dividend Cancellation", "Financial", "Dividends"),
    (22, "Dividend Initiation", "Financial", "Dividends"),
    (23, "Special Dividend", "Financial", "Dividends"),
    (24, "Buyback Announcements", "Financial", "Capital & Financing"),
    (25, "Buyback Closings", "Financial", "Capital & Financing"),
    (26, "Buyback Cancellations", "Financial", "Capital & Financing"),
    (27, "Buyback - Plan Changes", "Financial", "Capital & Financing"),
    (28, "Stock Splits & Dividends", "Financial", "Capital & Financing"),
    (29, "Debt Financing Related", "Financial", "Capital & Financing"),
    (30, "Private Placements", "Financial", "Capital & Financing"),
    (31, "IPOs", "Financial", "Capital & Financing"),
    (32, "Follow-on Equity Offerings", "Financial", "Capital & Financing"),
    (33, "Fixed Income Offerings", "Financial", "Capital & Financing"),
    (34, "Business Expansions", "Strategic Actions", "Strategic Actions"),
    (35, "Discontinued Operations", "Strategic Actions", "Strategic Actions"),
    (36, "Strategic Alliances", "Strategic Actions", "Strategic Actions"),
    (37, "Client Announcements", "Strategic Actions", "Strategic Actions"),
    (38, "Product Announcements", "Strategic Actions", "Strategic Actions"),
    (39, "Strategic Alternatives", "Strategic Actions", "Strategic Actions"),
    (40, "Seeking to Sell/Divest", "Strategic Actions", "Strategic Actions"),
    (41, "Seeking Acquisitions", "Strategic Actions", "Strategic Actions"),
    (42, "Seeking Financing", "Strategic Actions", "Strategic Actions"),
    (43, "M&A Rumors & Discussions", "M&A Transactions", "M&A Transactions"),
    (44, "M&A Announcements", "M&A Transactions", "M&A Transactions"),
    (45, "M&A Closings", "M&A Transactions", "M&A Transactions"),
    (46, "M&A Cancellations", "M&A Transactions", "M&A Transactions"),
    (47, "Spin-Off/Split-Off", "M&A Transactions", "M&A Transactions"),
    (48, "Delistings", "Market Events", "Market Events"),
    (49, "Exchange Changes", "Market Events", "Market Events"),
    (50, "Ticker Changes", "Market Events", "Market Events"),
    (51, "Index Constituent Drops", "Market Events", "Market Events"),
    (52, "Index Constituent Adds", "Market Events", "Market Events"),
    (53, "Regulatory Inquiries", "Regulatory Compliance", "Regulatory Compliance"),
    (54, "Regulatory - Regulations", "Regulatory Compliance", "Regulatory Compliance"),
    (55, "Regulatory - Compliance", "Regulatory Compliance", "Regulatory Compliance"),
    (56, "Regulatory - Enforcement", "Regulatory Compliance", "Regulatory Compliance"),
    (57, "Lawsuits & Legal Issues", "Regulatory Compliance", "Regulatory Compliance"),
    (58, "Delayed SEC Filings", "Regulatory Compliance", "Regulatory Compliance"),
    (59, "Delayed Earnings", "Regulatory Compliance", "Regulatory Compliance"),
    (60, "Auditor Changes", "Regulatory Compliance", "Regulatory Compliance"),
    (61, "Auditor Going Concern", "Regulatory Compliance", "Regulatory Compliance"),
    (62, "Debt Defaults", "Distress Indicators", "Distress Indicators"),
    (63, "Bankruptcy - Filing", "Distress Indicators", "Distress Indicators"),
    (64, "Bankruptcy - Conclusion", "Distress Indicators", "Distress Indicators"),
    (65, "Bankruptcy - Emergence", "Distress Indicators", "Distress Indicators"),
    (66, "Bankruptcy - Other", "Distress Indicators", "Distress Indicators"),
    (67, "Bankruptcy - Asset Sale", "Distress Indicators", "Distress Indicators"),
    (68, "Halt/Resume Operations", "Distress Indicators", "Distress Indicators"),
    (69, "Labor Announcements", "Operational Changes", "Operational Changes"),
    (70, "Bylaws/Rules Changes", "Operational Changes", "Operational Changes"),
]

# Tolerance rule table (data-driven scoring). Macro category rules take
# precedence over corporate unit rules.
TOLERANCE_RULES = [
    ("corporate-unit", "million-scale", "0.05"),
    ("corporate-unit", "percentage", "0.01"),
    ("corporate-unit", "ratio", "0.01"),
    ("corporate-unit", "per-share", "0.05"),
    ("corporate-unit", "count", "0.01"),
    ("macro-category", "rates-fx", "0.001"),
    ("macro-category", "other", "0.01"),
]

# Real constituents seeded so fixtures read naturally; the remainder of the
# roster is synthetic.
REAL_COMPANIES = [
    ("BKNG.OQ", "Booking Holdings Inc", "US", ["S&P 500", "NASDAQ 100"]),
    ("AAPL.OQ", "Apple Inc", "US", ["S&P 500", "NASDAQ 100"]),
    ("MSFT.OQ", "Microsoft Corp", "US", ["S&P 500", "NASDAQ 100"]),
    ("NVDA.OQ", "NVIDIA Corp", "US", ["S&P 500", "NASDAQ 100"]),
    ("GOOGL.OQ", "Alphabet Inc", "US", ["S&P 500", "NASDAQ 100"]),
    ("AMZN.OQ", "Amazon.com Inc", "US", ["S&P 500", "NASDAQ 100"]),
    ("META.OQ", "Meta Platforms Inc", "US", ["S&P 500", "NASDAQ 100"]),
    ("TSLA.OQ", "Tesla Inc", "US", ["S&P 500", "NASDAQ 100"]),
    ("JPM.N", "JPMorgan Chase & Co", "US", ["S&P 500"]),
    ("XOM.N", "Exxon Mobil Corp", "US", ["S&P 500"]),
    ("JNJ.N", "Johnson & Johnson", "US", ["S&P 500"]),
    ("PG.N", "Procter & Gamble Co", "US", ["S&P 500"]),
    ("KO.N", "Coca-Cola Co", "US", ["S&P 500"]),
    ("AZN.L", "AstraZeneca PLC", "UK", ["FTSE 100"]),
    ("SHEL.L", "Shell PLC", "UK", ["FTSE 100"]),
    ("HSBA.L", "HSBC Holdings PLC", "UK", ["FTSE 100"]),
    ("SAP.DE", "SAP SE", "DE", ["DAX 40"]),
    ("SIE.DE", "Siemens AG", "DE", ["DAX 40"]),
    ("AI.PA", "Air Liquide SA", "FR", ["CAC 40"]),
    ("MC.PA", "LVMH Moet Hennessy Louis Vuitton SE", "FR", ["CAC 40"]),
    ("OR.PA", "L'Oreal SA", "FR", ["CAC 40"]),
    ("7203.T", "Toyota Motor Corp", "JP", ["Nikkei 225"]),
    ("6758.T", "Sony Group Corp", "JP", ["Nikkei 225"]),
    ("8035.T", "Tokyo Electron Ltd", "JP", ["Nikkei 225"]),
    ("600519.SS", "Kweichow Moutai Co Ltd", "CN", ["CSI 300"]),
    ("601318.SS", "Ping An Insurance Group Co", "CN", ["CSI 300"]),
    ("0700.HK", "Tencent Holdings Ltd", "HK", ["HSI"]),
    ("9988.HK", "Alibaba Group Holding Ltd", "HK", ["HSI"]),
    ("D05.SI", "DBS Group Holdings Ltd", "SG", ["STI"]),
    ("Z74.SI", "Singapore Telecommunications Ltd", "SG", ["STI"]),
]

EXCHANGE_SUFFIX = {
    "US": "N", "UK": "L", "DE": "DE", "FR": "PA",
    "JP": "T", "CN": "SS", "HK": "HK", "SG": "SI",
}
CORP_SUFFIX = {
    "US": "Inc", "UK": "PLC", "DE": "AG", "FR": "SA",
    "JP": "Co Ltd", "CN": "Co Ltd", "HK": "Holdings Ltd", "SG": "Ltd",
}
SECTORS = [
    "Industrial", "Materials", "Energy", "Digital", "Consumer", "Logistics",
    "Pharma", "Capital", "Marine", "Utilities", "Foods", "Precision",
]


def _synth_ticker(rng: random.Random, economy: str, used: set[str]) -> str:
    while True:
        if economy == "JP":
            t = str(rng.randint(1300, 9999))
        elif economy == "CN":
            t = f"60{rng.randint(1000, 9999)}"
        elif economy == "HK":
            t = f"{rng.randint(1, 9999):04d}"
        else:
            length = rng.choice([3, 3, 4])
            t = "".join(rng.choice("ABCDEFGHIJKLMNOPQRSTUVWXYZ") for _ in range(length))
        ident = f"{t}.{EXCHANGE_SUFFIX[economy]}"
        if ident not in used:
            used.add(ident)
            return ident


def build_companies() -> list[tuple[str, str, str, list[str]]]:
    rng = random.Random(20251002)
    rows = list(REAL_COMPANIES)
    used = {r[0] for r in rows}
    per_index_real: dict[str, int] = {}
    for _, _, _, idxs in rows:
        for ix in idxs:
            per_index_real[ix] = per_index_real.get(ix, 0) + 1

    index_econ = {name: econ for name, econ, _ in INDICES}
    index_target = {name: n for name, _, n in INDICES}

    # NASDAQ 100 members are a subset of the S&P 500 roster in this snapshot,
    # keeping the distinct-company total at 1,314.
    n_ndx_needed = index_target["NASDAQ 100"] - per_index_real.get("NASDAQ 100", 0)
    n_spx_needed = index_target["S&P 500"] - per_index_real.get("S&P 500", 0)
    counter = 0
    for i in range(n_spx_needed):
        ident = _synth_ticker(rng, "US", used)
        counter += 1
        name = f"{rng.choice(SECTORS)} {ident.split('.')[0].title()} {CORP_SUFFIX['US']}"
        memberships = ["S&P 500"]
        if i < n_ndx_needed:
            memberships.append("NASDAQ 100")
        rows.append((ident, name, "US", memberships))

    for index_name in ("FTSE 100", "DAX 40", "CAC 40", "Nikkei 225", "CSI 300", "HSI", "STI"):
        econ = index_econ[index_name]
        needed = index_target[index_name] - per_index_real.get(index_name, 0)
        for _ in range(needed):
            ident = _synth_ticker(rng, econ, used)
            word = ident.split(".")[0]
            word = word.title() if word.isalpha() else f"No {word}"
            name = f"{rng.choice(SECTORS)} {word} {CORP_SUFFIX[econ]}"
            rows.append((ident, name, econ, [index_name]))
    return rows


def write_tsv(path: Path, table: str, header: list[str], rows: list[list[str]]) -> None:
    lines = [f"# schema: {table}/1"]
    lines.append("\t".join(header))
    for row in rows:
        lines.append("\t".join(row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {path.name}: {len(rows)} rows")


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)

    write_tsv(OUT / "economies.tsv", "economies",
              ["code", "name", "utc_offset"],
              [[c, n, str(o)] for c, n, o in ECONOMIES])

    write_tsv(OUT / "indices.tsv", "indices",
              ["name", "economy", "snapshot_date"],
              [[n, e, SNAPSHOT_DATE] for n, e, _ in INDICES])

    companies = build_companies()
    write_tsv(OUT / "companies.tsv", "companies",
              ["identifier", "name", "market", "indices"],
              [[i, n, m, ";".join(idx)] for i, n, m, idx in companies])

    macro_rows = []
    for code, display, unit, cadence, scope in MACRO_TYPES:
        if scope == "GLOBAL":
            macro_rows.append([f"GLOBAL.{code}", code, "GLOBAL", display, unit, cadence])
            continue
        for econ, _, _ in ECONOMIES:
            if scope == "EXCL_SG" and econ == "SG":
                continue
            if scope == "EXCL_US" and econ == "US":
                continue
            macro_rows.append([
                f"{econ}.{code}", code, econ,
                f"{ECON_UPPER[econ]} {display}", unit, cadence,
            ])
    write_tsv(OUT / "macro_indicators.tsv", "macro_indicators",
              ["indicator_id", "indicator_type", "economy", "display_name",
               "unit_class", "cadence"],
              macro_rows)

    write_tsv(OUT / "corporate_metrics.tsv", "corporate_metrics",
              ["metric_id", "name", "category", "unit_class", "derivation"],
              [[str(i), n, c, u, d] for i, n, c, u, d in CORPORATE_METRICS])

    write_tsv(OUT / "subcategories.tsv", "subcategories",
              ["code", "category", "description"],
              [list(r) for r in SUBCATEGORIES])

    grounding_rows = []
    for econ, _, _ in ECONOMIES:
        for code, _, _ in SUBCATEGORIES:
            authority, trigger, thresholds = GROUNDING[econ][code]
            grounding_rows.append([code, econ, authority, trigger, thresholds])
    write_tsv(OUT / "grounding_rules.tsv", "grounding_rules",
              ["subcategory", "economy", "authority", "trigger", "thresholds"],
              grounding_rows)

    write_tsv(OUT / "corporate_events.tsv", "corporate_events",
              ["event_id", "name", "category", "subgroup"],
              [[str(i), n, c, s] for i, n, c, s in CORPORATE_EVENTS])

    write_tsv(OUT / "tolerance_rules.tsv", "tolerance_rules",
              ["selector_kind", "selector", "epsilon"],
              [list(r) for r in TOLERANCE_RULES])

    # sanity
    assert len(macro_rows) == 96, len(macro_rows)
    assert len(companies) == 1314, len(companies)
    assert len(grounding_rows) == 208
    assert len(CORPORATE_METRICS) == 121
    assert len(CORPORATE_EVENTS) == 70
    assert len(SUBCATEGORIES) == 26
    print("all cardinalities OK")


if __name__ == "__main__":
    main()
