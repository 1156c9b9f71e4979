"""Salted credential storage, verification and lockout accounting.

Only a salted SHA-256 digest of the canonical password string is ever
persisted; the store file (JSON Lines, append-only, last record wins per
user) holds no plaintext and no canonical strings.
"""

from __future__ import annotations

import hashlib
import json
import secrets
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .errors import DuplicateUser, IoFailure, PolicyViolation, UnknownUser
from .model import SemanticPassword, canonicalize

DEFAULT_MIN_MOVES = 2
DEFAULT_MAX_FAILURES = 5
DEFAULT_LOCKOUT_SECONDS = 30.0


def _digest(salt: bytes, canonical: str) -> bytes:
    return hashlib.sha256(salt + canonical.encode("ascii")).digest()


@dataclass(frozen=True)
class CredentialRecord:
    user: str
    salt: bytes
    digest: bytes
    min_moves: int
    created_at: float

    def matches(self, attempt: SemanticPassword) -> bool:
        """Pure digest comparison, no lockout bookkeeping."""
        return secrets.compare_digest(_digest(self.salt, canonicalize(attempt)), self.digest)

    def to_dict(self) -> dict:
        return {
            "user": self.user,
            "salt_hex": self.salt.hex(),
            "digest_hex": self.digest.hex(),
            "min_moves": self.min_moves,
            "created_at": self.created_at,
        }


def record_from_dict(obj: dict) -> CredentialRecord:
    return CredentialRecord(
        user=obj["user"],
        salt=bytes.fromhex(obj["salt_hex"]),
        digest=bytes.fromhex(obj["digest_hex"]),
        min_moves=int(obj["min_moves"]),
        created_at=float(obj["created_at"]),
    )


@dataclass
class AttemptCounter:
    user: str
    failures: int = 0
    locked_until: float | None = None


@dataclass(frozen=True)
class VerifyResult:
    status: str  # "accepted" | "rejected" | "locked"
    remaining: int
    retry_after: float = 0.0

    @property
    def accepted(self) -> bool:
        return self.status == "accepted"


class CredentialStore:
    """Enrollment and verification with a simple consecutive-failure lockout.

    Mutations are serialized with a lock, so concurrent callers are safe.
    `clock` is injectable for tests.
    """

    def __init__(
        self,
        path: str | Path | None = None,
        min_moves: int = DEFAULT_MIN_MOVES,
        max_failures: int = DEFAULT_MAX_FAILURES,
        lockout_seconds: float = DEFAULT_LOCKOUT_SECONDS,
        clock: Callable[[], float] = time.time,
    ):
        self.path = Path(path) if path is not None else None
        self.min_moves = min_moves
        self.max_failures = max_failures
        self.lockout_seconds = lockout_seconds
        self.clock = clock
        self._records: dict[str, CredentialRecord] = {}
        self._counters: dict[str, AttemptCounter] = {}
        self._lock = threading.Lock()
        if self.path is not None and self.path.exists():
            self._load()

    def _load(self) -> None:
        try:
            text = self.path.read_text(encoding="utf-8")
        except OSError as exc:
            raise IoFailure(f"cannot read credential store {self.path}: {exc}") from exc
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            record = record_from_dict(json.loads(line))
            self._records[record.user] = record

    def _append(self, record: CredentialRecord) -> None:
        if self.path is None:
            return
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(record.to_dict(), sort_keys=True) + "\n")
        except OSError as exc:
            raise IoFailure(f"cannot append to credential store {self.path}: {exc}") from exc

    def enroll(self, user: str, password: SemanticPassword) -> CredentialRecord:
        if len(password) < self.min_moves:
            raise PolicyViolation(
                f"password has {len(password)} move(s), policy requires {self.min_moves}"
            )
        with self._lock:
            if user in self._records:
                raise DuplicateUser(f"user {user!r} already enrolled")
            salt = secrets.token_bytes(16)
            record = CredentialRecord(
                user=user,
                salt=salt,
                digest=_digest(salt, canonicalize(password)),
                min_moves=self.min_moves,
                created_at=self.clock(),
            )
            self._records[user] = record
            self._counters[user] = AttemptCounter(user)
            self._append(record)
            return record

    def verify(self, user: str, attempt: SemanticPassword) -> VerifyResult:
        with self._lock:
            record = self._records.get(user)
            if record is None:
                raise UnknownUser(f"user {user!r} not enrolled")
            counter = self._counters.setdefault(user, AttemptCounter(user))
            now = self.clock()
            if counter.locked_until is not None and now < counter.locked_until:
                return VerifyResult("locked", remaining=0, retry_after=counter.locked_until - now)
            if record.matches(attempt):
                counter.failures = 0
                counter.locked_until = None
                return VerifyResult("accepted", remaining=self.max_failures)
            counter.failures += 1
            if counter.failures >= self.max_failures:
                counter.locked_until = now + self.lockout_seconds
                return VerifyResult("locked", remaining=0, retry_after=self.lockout_seconds)
            return VerifyResult("rejected", remaining=self.max_failures - counter.failures)

    def record_for(self, user: str) -> CredentialRecord:
        record = self._records.get(user)
        if record is None:
            raise UnknownUser(f"user {user!r} not enrolled")
        return record

    def users(self) -> list[str]:
        return sorted(self._records)
