"""Live financial forecasting benchmark engine.

Weekly task generation under a dual-track taxonomy, temporally isolated
model forecasting through pluggable adapters, rolling resolution with
expert verification, and tolerance-based scoring into leaderboards.
"""

__version__ = "0.1.0"
