"""Identity verification and bearer-session management.

The identity provider is pluggable: deployments can delegate credential
checks to an external account system; the local default stores salted
credential digests in the user catalog.
"""

from __future__ import annotations

import hashlib
import re
import secrets
import threading
import time
from dataclasses import dataclass
from typing import Protocol

from agrifed.errors import Conflict, InvalidCredentials, Unauthorized, UnknownUser
from agrifed.store.catalog import Catalog
from agrifed.store.documents import UserAccount

USERNAME_RE = re.compile(r"^[A-Za-z0-9_.-]{1,64}$")

SESSION_TTL_SECONDS = 24 * 3600.0


class IdentityProvider(Protocol):
    def verify(self, username: str, credential: str) -> bool: ...


def _digest(credential: str, salt: str) -> str:
    return hashlib.sha256(f"{salt}:{credential}".encode("utf-8")).hexdigest()


class LocalIdentityProvider:
    """Catalog-backed provider; also handles local account registration."""

    def __init__(self, catalog: Catalog):
        self.catalog = catalog

    def register(self, username: str, credential: str) -> None:
        if not USERNAME_RE.match(username or ""):
            raise Conflict(f"invalid username {username!r}", field="username")
        if not credential:
            raise InvalidCredentials("credential must be non-empty", field="credential")
        salt = secrets.token_hex(8)
        account = UserAccount(
            username=username,
            credential_hash=f"sha256${salt}${_digest(credential, salt)}",
            created_at=time.time(),
        )
        self.catalog.create_user(account)

    def verify(self, username: str, credential: str) -> bool:
        account = self.catalog.get_user(username)
        if account is None:
            raise UnknownUser(f"no such user {username!r}")
        try:
            _, salt, stored = account.credential_hash.split("$")
        except ValueError:
            return False
        return secrets.compare_digest(stored, _digest(credential, salt))


@dataclass(frozen=True)
class SessionToken:
    token: str
    subject: str
    issued_at: float
    expires_at: float


class SessionManager:
    def __init__(self, ttl: float = SESSION_TTL_SECONDS, clock=time.time):
        self.ttl = ttl
        self.clock = clock
        self._lock = threading.Lock()
        self._sessions: dict[str, SessionToken] = {}

    def mint(self, subject: str) -> SessionToken:
        now = self.clock()
        token = SessionToken(
            token=secrets.token_urlsafe(32),
            subject=subject,
            issued_at=now,
            expires_at=now + self.ttl,
        )
        with self._lock:
            self._sessions[token.token] = token
        return token

    def authenticate(self, token: str | None) -> str:
        """Username for a live token; expired or unknown tokens are rejected."""
        if not token:
            raise Unauthorized("missing bearer token")
        with self._lock:
            session = self._sessions.get(token)
        if session is None:
            raise Unauthorized("unknown session token")
        if self.clock() > session.expires_at:
            with self._lock:
                self._sessions.pop(token, None)
            raise Unauthorized("session expired")
        return session.subject

    def revoke(self, token: str) -> None:
        with self._lock:
            self._sessions.pop(token, None)
