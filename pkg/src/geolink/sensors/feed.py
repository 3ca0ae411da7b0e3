"""File-backed sensor feed standing in for the external IoT system.

Readings come from CSV files (``station,parameter,timestamp,value,unit``)
and are served through the same narrow query contract a live endpoint
would offer: latest value at an instant, and threshold exceedance.
"""

from __future__ import annotations

import csv
import io
import json
import math
from bisect import bisect_right, insort
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from geolink.errors import StorageError, ValidationError
from geolink.locks import RWLock

CSV_HEADER = ["station", "parameter", "timestamp", "value", "unit"]

GT = "GT"
LT = "LT"

# Readings older than this relative to the query instant no longer count;
# the feed then reports "unknown" rather than a stale verdict.
DEFAULT_MAX_AGE_S = 24 * 3600.0


def parse_instant(text: str) -> datetime:
    """ISO-8601 timestamp; 'Z' accepted, naive values are taken as UTC."""
    raw = text.strip()
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    moment = datetime.fromisoformat(raw)
    if moment.tzinfo is None:
        moment = moment.replace(tzinfo=timezone.utc)
    return moment.astimezone(timezone.utc)


@dataclass(frozen=True)
class SensorReading:
    station_id: str
    parameter: str
    timestamp: datetime
    value: float
    unit: str

    def to_dict(self) -> dict:
        return {
            "station": self.station_id,
            "parameter": self.parameter,
            "timestamp": self.timestamp.isoformat().replace("+00:00", "Z"),
            "value": self.value,
            "unit": self.unit,
        }


@dataclass
class ReadingsReport:
    accepted: int
    rejected: list[tuple[int, str]]  # (line number, reason)


class SensorFeed:
    def __init__(self, store_path: str | Path | None = None, max_age_s: float = DEFAULT_MAX_AGE_S):
        self._series: dict[tuple[str, str], list[SensorReading]] = {}
        self._lock = RWLock()
        self.max_age_s = max_age_s
        self._store_path = Path(store_path) if store_path else None
        self._store_file = None
        if self._store_path is not None:
            if self._store_path.exists():
                with open(self._store_path, encoding="utf-8") as fh:
                    self._ingest_csv(fh, persist=False)
            else:
                self._store_path.parent.mkdir(parents=True, exist_ok=True)
                self._store_path.write_text(",".join(CSV_HEADER) + "\n", encoding="utf-8")
            self._store_file = open(self._store_path, "a", encoding="utf-8")

    def ingest_readings(self, path: str | Path) -> ReadingsReport:
        """Ingest a CSV file from disk.

        Invalid lines are reported with a reason; exact duplicates are
        skipped and reported as rejected, so re-ingesting a file is a no-op.
        """
        try:
            fh = open(path, encoding="utf-8")
        except OSError as exc:
            raise StorageError(f"cannot read readings file: {exc}") from exc
        with fh:
            return self._ingest_csv(fh, persist=True)

    def ingest_readings_text(self, text: str) -> ReadingsReport:
        """Ingest CSV content handed over as a string (gateway upload path)."""
        return self._ingest_csv(io.StringIO(text), persist=True)

    def _ingest_csv(self, fh, persist: bool) -> ReadingsReport:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValidationError("readings file is empty") from None
        if [h.strip() for h in header] != CSV_HEADER:
            raise ValidationError(f"readings header must be {','.join(CSV_HEADER)}")
        accepted = 0
        rejected: list[tuple[int, str]] = []
        with self._lock.write():
            for line_no, row in enumerate(reader, start=2):
                if not row or all(not cell.strip() for cell in row):
                    continue
                try:
                    reading = self._parse_row(row)
                except ValidationError as exc:
                    rejected.append((line_no, str(exc)))
                    continue
                key = (reading.station_id, reading.parameter)
                series = self._series.setdefault(key, [])
                clash = self._at_same_instant(series, reading.timestamp)
                if clash is not None:
                    if clash.value == reading.value and clash.unit == reading.unit:
                        rejected.append((line_no, "duplicate"))
                    else:
                        rejected.append((line_no, "conflicting duplicate timestamp"))
                    continue
                insort(series, reading, key=lambda r: r.timestamp)
                accepted += 1
                if persist and self._store_file is not None:
                    writer = csv.writer(self._store_file, lineterminator="\n")
                    writer.writerow(
                        [
                            reading.station_id,
                            reading.parameter,
                            reading.timestamp.isoformat().replace("+00:00", "Z"),
                            repr(reading.value),
                            reading.unit,
                        ]
                    )
            if persist and self._store_file is not None:
                self._store_file.flush()
        return ReadingsReport(accepted=accepted, rejected=rejected)

    @staticmethod
    def _parse_row(row: list[str]) -> SensorReading:
        if len(row) != 5:
            raise ValidationError(f"expected 5 fields, got {len(row)}")
        station, parameter, ts_text, value_text, unit = (cell.strip() for cell in row)
        if not station:
            raise ValidationError("empty station")
        if not parameter:
            raise ValidationError("empty parameter")
        if not unit:
            raise ValidationError("empty unit")
        try:
            timestamp = parse_instant(ts_text)
        except ValueError as exc:
            raise ValidationError(f"bad timestamp {ts_text!r}") from exc
        try:
            value = float(value_text)
        except ValueError as exc:
            raise ValidationError(f"bad value {value_text!r}") from exc
        if not math.isfinite(value):
            raise ValidationError(f"non-finite value {value_text!r}")
        return SensorReading(station, parameter, timestamp, value, unit)

    @staticmethod
    def _at_same_instant(series: list[SensorReading], ts: datetime) -> SensorReading | None:
        i = bisect_right(series, ts, key=lambda r: r.timestamp)
        if i and series[i - 1].timestamp == ts:
            return series[i - 1]
        return None

    def latest_value(self, station_id: str, parameter: str, at: datetime) -> SensorReading | None:
        """The reading with the greatest timestamp <= ``at``, or None."""
        with self._lock.read():
            series = self._series.get((station_id, parameter), [])
            i = bisect_right(series, at, key=lambda r: r.timestamp)
            return series[i - 1] if i else None

    def exceeds(
        self, station_id: str, parameter: str, comparator: str, threshold: float, at: datetime
    ) -> bool | None:
        """Strict comparison of the latest applicable reading against the
        threshold; None means unknown (no reading, or the latest one is
        older than the staleness window)."""
        if comparator not in (GT, LT):
            raise ValidationError(f"comparator must be GT or LT, got {comparator!r}")
        reading = self.latest_value(station_id, parameter, at)
        if reading is None:
            return None
        if (at - reading.timestamp).total_seconds() > self.max_age_s:
            return None
        if comparator == GT:
            return reading.value > threshold
        return reading.value < threshold

    def series_keys(self) -> list[tuple[str, str]]:
        with self._lock.read():
            return sorted(self._series)

    def snapshot(self) -> str:
        with self._lock.read():
            doc = {
                f"{station}/{parameter}": [r.to_dict() for r in series]
                for (station, parameter), series in sorted(self._series.items())
            }
            return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)

    def close(self) -> None:
        if self._store_file is not None:
            self._store_file.close()
            self._store_file = None
