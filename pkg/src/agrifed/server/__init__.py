"""Public HTTP API: auth, orchestration, and every user-facing feature."""

from agrifed.server.config import AppConfig
from agrifed.server.identity import LocalIdentityProvider, SessionManager
from agrifed.server.service import AppService
from agrifed.server.http import api_http_service

__all__ = [
    "AppConfig",
    "AppService",
    "LocalIdentityProvider",
    "SessionManager",
    "api_http_service",
]
