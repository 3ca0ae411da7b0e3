"""Accounts, signed stateless tokens, and rights checks.

Tokens are HMAC-signed over the encoded payload string and compared as
encoded strings, so any single-character tamper fails verification
(base64 trailing-bit malleability cannot slip through). A small in-memory
deny-list handles compromised tokens; lifetimes are short by default.
"""

from __future__ import annotations

import base64
import hashlib
import hmac
import json
import os
import secrets
import threading
import time
from dataclasses import dataclass
from pathlib import Path

from geolink.errors import (
    AuthenticationError,
    ConflictError,
    NotFoundError,
    RateLimitError,
    ValidationError,
)

RIGHTS = (
    "read_projects",
    "read_documents",
    "read_confidential",
    "read_sensors",
    "read_restrictions",
    "ingest",
    "admin",
)

_PBKDF2_ITERATIONS = 60_000


def _hash_password(password: str, salt: bytes) -> bytes:
    return hashlib.pbkdf2_hmac("sha256", password.encode("utf-8"), salt, _PBKDF2_ITERATIONS)


@dataclass(frozen=True)
class UserAccount:
    username: str
    salt: str  # hex
    password_hash: str  # hex
    rights: frozenset[str]


class AccountStore:
    """JSON-file backed user accounts; passwords stored as salted PBKDF2."""

    def __init__(self, path: str | Path | None = None):
        self._path = Path(path) if path else None
        self._accounts: dict[str, UserAccount] = {}
        self._lock = threading.Lock()
        # Dummy secret so verification work is constant for unknown users.
        self._decoy_salt = bytes.fromhex("00" * 16)
        if self._path is not None and self._path.exists():
            doc = json.loads(self._path.read_text(encoding="utf-8"))
            for entry in doc.get("users", []):
                account = UserAccount(
                    username=entry["username"],
                    salt=entry["salt"],
                    password_hash=entry["hash"],
                    rights=frozenset(entry["rights"]),
                )
                self._accounts[account.username] = account

    def add(self, username: str, password: str, rights) -> UserAccount:
        rights = _check_rights(rights)
        if not username:
            raise ValidationError("username must be non-empty")
        if not password:
            raise ValidationError("password must be non-empty")
        with self._lock:
            if username in self._accounts:
                raise ConflictError(f"user {username} already exists")
            salt = secrets.token_bytes(16)
            account = UserAccount(
                username=username,
                salt=salt.hex(),
                password_hash=_hash_password(password, salt).hex(),
                rights=rights,
            )
            self._accounts[username] = account
            self._save()
            return account

    def set_rights(self, username: str, rights) -> UserAccount:
        rights = _check_rights(rights)
        with self._lock:
            account = self._accounts.get(username)
            if account is None:
                raise NotFoundError(f"user {username} does not exist")
            updated = UserAccount(
                username=account.username,
                salt=account.salt,
                password_hash=account.password_hash,
                rights=rights,
            )
            self._accounts[username] = updated
            self._save()
            return updated

    def verify(self, username: str, password: str) -> UserAccount:
        """Constant-shape credential check: unknown user and wrong password
        are indistinguishable to the caller."""
        with self._lock:
            account = self._accounts.get(username)
        if account is None:
            salt, expected = self._decoy_salt, b"\x00" * 32
        else:
            salt, expected = bytes.fromhex(account.salt), bytes.fromhex(account.password_hash)
        candidate = _hash_password(password, salt)
        if not hmac.compare_digest(candidate, expected) or account is None:
            raise AuthenticationError("invalid credentials")
        return account

    def usernames(self) -> list[str]:
        with self._lock:
            return sorted(self._accounts)

    def _save(self) -> None:
        if self._path is None:
            return
        self._path.parent.mkdir(parents=True, exist_ok=True)
        doc = {
            "users": [
                {
                    "username": a.username,
                    "salt": a.salt,
                    "hash": a.password_hash,
                    "rights": sorted(a.rights),
                }
                for a in self._accounts.values()
            ]
        }
        self._path.write_text(json.dumps(doc, indent=2, sort_keys=True), encoding="utf-8")


def _check_rights(rights) -> frozenset[str]:
    rights = frozenset(rights)
    unknown = rights - set(RIGHTS)
    if unknown:
        raise ValidationError(f"unknown rights: {sorted(unknown)}")
    return rights


def _b64(data: bytes) -> str:
    return base64.urlsafe_b64encode(data).decode("ascii").rstrip("=")


def _unb64(text: str) -> bytes:
    padding = "=" * (-len(text) % 4)
    return base64.urlsafe_b64decode(text + padding)


@dataclass(frozen=True)
class TokenPayload:
    username: str
    rights: frozenset[str]
    expires: float  # epoch seconds


@dataclass(frozen=True)
class Decision:
    allowed: bool
    reason: str | None = None
    payload: TokenPayload | None = None


class TokenService:
    def __init__(self, secret: bytes, lifetime_s: float = 8 * 3600.0, clock=time.time):
        if len(secret) < 16:
            raise ValidationError("token secret must be at least 16 bytes")
        self._secret = secret
        self.lifetime_s = lifetime_s
        self._clock = clock
        self._revoked: set[str] = set()
        self._lock = threading.Lock()

    def issue(self, username: str, rights) -> str:
        payload = {
            "username": username,
            "rights": sorted(rights),
            "expires": int(self._clock() + self.lifetime_s),
        }
        encoded = _b64(
            json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")
        )
        return f"{encoded}.{self._mac(encoded)}"

    def _mac(self, encoded_payload: str) -> str:
        return _b64(
            hmac.new(self._secret, encoded_payload.encode("ascii"), hashlib.sha256).digest()
        )

    def verify(self, token: str) -> tuple[TokenPayload | None, str | None]:
        """(payload, None) for a valid token, else (None, reason)."""
        if not token or token.count(".") != 1:
            return None, "malformed"
        encoded, mac = token.split(".")
        if not hmac.compare_digest(self._mac(encoded), mac):
            return None, "bad_signature"
        try:
            doc = json.loads(_unb64(encoded))
            payload = TokenPayload(
                username=doc["username"],
                rights=frozenset(doc["rights"]),
                expires=float(doc["expires"]),
            )
        except Exception:
            return None, "malformed"
        if payload.expires < self._clock():
            return None, "expired"
        with self._lock:
            if hashlib.sha256(token.encode("ascii")).hexdigest() in self._revoked:
                return None, "revoked"
        return payload, None

    def authorize(self, token: str, required_right: str) -> Decision:
        """Allow iff the signature is valid, the token is live, and the
        required right is present. Deny is a value, not an error."""
        payload, reason = self.verify(token)
        if payload is None:
            return Decision(allowed=False, reason=reason)
        if required_right not in payload.rights:
            return Decision(allowed=False, reason="insufficient_rights", payload=payload)
        return Decision(allowed=True, payload=payload)

    def revoke(self, token: str) -> None:
        with self._lock:
            self._revoked.add(hashlib.sha256(token.encode("ascii")).hexdigest())


class LoginRateLimiter:
    """Fixed-window limiter serialized per username."""

    def __init__(self, window_s: float = 60.0, max_attempts: int = 10, clock=time.time):
        self.window_s = window_s
        self.max_attempts = max_attempts
        self._clock = clock
        self._attempts: dict[str, tuple[float, int]] = {}
        self._lock = threading.Lock()

    def check(self, username: str) -> None:
        now = self._clock()
        with self._lock:
            window_start, count = self._attempts.get(username, (now, 0))
            if now - window_start >= self.window_s:
                window_start, count = now, 0
            count += 1
            self._attempts[username] = (window_start, count)
            if count > self.max_attempts:
                raise RateLimitError("too many login attempts, retry later")


def load_or_create_secret(path: str | Path) -> bytes:
    path = Path(path)
    if path.exists():
        return path.read_bytes()
    path.parent.mkdir(parents=True, exist_ok=True)
    secret = secrets.token_bytes(32)
    path.write_bytes(secret)
    os.chmod(path, 0o600)
    return secret
