"""Minimal JSON-over-HTTP service kit on the standard library.

Routes are (method, "/path/with/{params}") pairs mapped to handlers taking a
Request and returning (status, json-serializable body). Platform errors
serialize as {code, message, field?} at their declared HTTP status.
"""

from __future__ import annotations

import json
import re
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlsplit

from agrifed.errors import AgrifedError, MissingField


@dataclass
class Request:
    method: str
    path: str
    params: dict[str, str] = field(default_factory=dict)
    query: dict[str, str] = field(default_factory=dict)
    headers: dict[str, str] = field(default_factory=dict)
    body: bytes = b""

    def json(self) -> dict:
        if not self.body:
            return {}
        try:
            doc = json.loads(self.body.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError):
            raise MissingField("request body is not valid JSON")
        if not isinstance(doc, dict):
            raise MissingField("request body must be a JSON object")
        return doc

    def bearer_token(self) -> str | None:
        auth = self.headers.get("authorization", "")
        if auth.lower().startswith("bearer "):
            return auth[7:].strip()
        return None


def _compile(pattern: str) -> re.Pattern:
    regex = re.sub(r"\{(\w+)\}", r"(?P<\1>[^/]+)", pattern)
    return re.compile(f"^{regex}$")


class JsonHttpService:
    """Route table; subclasses or composition register handlers."""

    def __init__(self, name: str = "service"):
        self.name = name
        self._routes: list[tuple[str, re.Pattern, object]] = []

    def route(self, method: str, pattern: str):
        def register(handler):
            self._routes.append((method.upper(), _compile(pattern), handler))
            return handler

        return register

    def dispatch(self, request: Request) -> tuple[int, dict]:
        matched_path = False
        for method, regex, handler in self._routes:
            m = regex.match(request.path)
            if not m:
                continue
            matched_path = True
            if method != request.method:
                continue
            request.params = m.groupdict()
            try:
                return handler(request)
            except AgrifedError as err:
                return err.http_status, err.to_json()
            except Exception as exc:  # do not leak internals to the wire
                return 500, {"code": "InternalError", "message": str(exc)}
        if matched_path:
            return 405, {"code": "MethodNotAllowed", "message": request.method}
        return 404, {"code": "NotFound", "message": f"no route for {request.path}"}


class _Handler(BaseHTTPRequestHandler):
    service: JsonHttpService = None  # set per server subclass
    protocol_version = "HTTP/1.1"

    def log_message(self, *args):  # quiet by default
        pass

    def _run(self):
        length = int(self.headers.get("Content-Length") or 0)
        body = self.rfile.read(length) if length else b""
        split = urlsplit(self.path)
        query = {k: v[-1] for k, v in parse_qs(split.query).items()}
        request = Request(
            method=self.command,
            path=split.path,
            query=query,
            headers={k.lower(): v for k, v in self.headers.items()},
            body=body,
        )
        status, payload = self.service.dispatch(request)
        data = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    do_GET = do_POST = do_DELETE = do_PUT = _run


@dataclass
class HttpServerHandle:
    server: ThreadingHTTPServer
    thread: threading.Thread
    host: str
    port: int

    @property
    def base_url(self) -> str:
        return f"http://{self.host}:{self.port}"

    def stop(self):
        self.server.shutdown()
        self.server.server_close()
        self.thread.join(timeout=5)


def serve(service: JsonHttpService, host: str = "127.0.0.1", port: int = 0) -> HttpServerHandle:
    handler = type(f"{service.name}Handler", (_Handler,), {"service": service})
    server = ThreadingHTTPServer((host, port), handler)
    server.daemon_threads = True
    thread = threading.Thread(target=server.serve_forever, daemon=True, name=service.name)
    thread.start()
    return HttpServerHandle(server=server, thread=thread, host=host, port=server.server_port)
