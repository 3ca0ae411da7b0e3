"""Server configuration, loaded from a JSON file.

Paths in the file are resolved relative to the file's directory.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from pathlib import Path

from geolink.errors import ValidationError


@dataclass
class ServerConfig:
    listen_host: str = "127.0.0.1"
    listen_port: int = 8080
    data_dir: Path = Path("./geolink-data")
    secret_path: Path | None = None  # default: <data_dir>/secret.key
    account_store: Path | None = None  # default: <data_dir>/accounts.json
    token_lifetime_s: float = 8 * 3600.0
    sensor_max_age_s: float = 24 * 3600.0
    min_overlap: float = 0.05
    association_radius_deg: float = 0.1
    mode: str = "embedded"  # embedded | multiproc
    rate_limit_window_s: float = 60.0
    rate_limit_max_attempts: int = 10
    lexicon_path: Path | None = None
    persons_path: Path | None = None
    companies_path: Path | None = None

    def __post_init__(self):
        if self.mode not in ("embedded", "multiproc"):
            raise ValidationError(f"mode must be embedded or multiproc, got {self.mode!r}")
        if not (0.0 < self.min_overlap <= 1.0):
            raise ValidationError("min_overlap must be in (0, 1]")
        self.data_dir = Path(self.data_dir)
        if self.secret_path is None:
            self.secret_path = self.data_dir / "secret.key"
        if self.account_store is None:
            self.account_store = self.data_dir / "accounts.json"

    @classmethod
    def load(cls, path: str | Path) -> "ServerConfig":
        path = Path(path)
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot load config {path}: {exc}") from exc
        known = {f.name: f for f in fields(cls)}
        kwargs = {}
        path_fields = {
            "data_dir", "secret_path", "account_store",
            "lexicon_path", "persons_path", "companies_path",
        }
        for key, value in doc.items():
            if key not in known:
                raise ValidationError(f"unknown config key {key!r}")
            if key in path_fields and value is not None:
                value = (path.parent / value).resolve()
            kwargs[key] = value
        return cls(**kwargs)
