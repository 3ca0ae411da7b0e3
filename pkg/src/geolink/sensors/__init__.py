"""File-backed sensor feed."""

from geolink.sensors.feed import SensorFeed, SensorReading

__all__ = ["SensorFeed", "SensorReading"]
