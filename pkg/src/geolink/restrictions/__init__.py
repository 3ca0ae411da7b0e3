"""Restriction evaluation over graph, sensors, and overlaps."""

from geolink.restrictions.engine import (
    ActiveRestriction,
    ChainLink,
    RestrictionEngine,
    WeatherEvaluation,
)

__all__ = ["RestrictionEngine", "ActiveRestriction", "ChainLink", "WeatherEvaluation"]
