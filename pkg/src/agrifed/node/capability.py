"""Per-operation capability tokens.

The orchestration tier never touches raw data itself; it mints a short-lived
HMAC-signed capability naming (subject, dataset, operation kind) and the
compute slot verifies it before loading anything. Tokens expire after 60
seconds by default.
"""

from __future__ import annotations

import base64
import hashlib
import hmac
import json
import time

from agrifed.errors import Unauthorized

DEFAULT_TTL_SECONDS = 60.0


def _sign(secret: str, payload: bytes) -> str:
    return hmac.new(secret.encode("utf-8"), payload, hashlib.sha256).hexdigest()


def mint_capability(
    secret: str,
    subject: str,
    dataset_id: str,
    kind: str,
    ttl: float = DEFAULT_TTL_SECONDS,
    now: float | None = None,
) -> str:
    issued = time.time() if now is None else now
    claims = {"sub": subject, "ds": dataset_id, "kind": kind, "exp": issued + ttl}
    payload = base64.urlsafe_b64encode(json.dumps(claims, separators=(",", ":")).encode("utf-8"))
    return f"{payload.decode('ascii')}.{_sign(secret, payload)}"


def verify_capability(
    secret: str,
    token: str,
    dataset_id: str,
    kind: str,
    now: float | None = None,
) -> dict:
    """Check signature, expiry, and (dataset, kind) binding; return claims."""
    try:
        payload_b64, signature = token.rsplit(".", 1)
        payload = payload_b64.encode("ascii")
    except (ValueError, AttributeError, UnicodeEncodeError):
        raise Unauthorized("malformed capability token")
    if not hmac.compare_digest(_sign(secret, payload), signature):
        raise Unauthorized("capability signature mismatch")
    try:
        claims = json.loads(base64.urlsafe_b64decode(payload))
    except (ValueError, json.JSONDecodeError):
        raise Unauthorized("malformed capability payload")
    current = time.time() if now is None else now
    if current > float(claims.get("exp", 0)):
        raise Unauthorized("capability expired")
    if claims.get("ds") != dataset_id:
        raise Unauthorized("capability bound to a different dataset")
    if claims.get("kind") != kind:
        raise Unauthorized("capability bound to a different operation")
    return claims
