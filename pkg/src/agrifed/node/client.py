"""Compute-slot clients: in-process for tests, HTTP for deployment."""

from __future__ import annotations

import requests

from agrifed.errors import StackUnreachable, error_from_wire
from agrifed.node.service import ComputeRequest, ComputeResult, FarmerNode


class LocalNodeClient:
    def __init__(self, node: FarmerNode):
        self.node = node

    def compute(self, request: ComputeRequest, timeout: float | None = None) -> ComputeResult:
        return self.node.handle(request)

    def audit(self) -> list[str]:
        return self.node.audit_state()


class HttpNodeClient:
    def __init__(self, base_url: str, session: requests.Session | None = None):
        self.base_url = base_url.rstrip("/")
        self.session = session or requests.Session()

    def compute(self, request: ComputeRequest, timeout: float | None = 120.0) -> ComputeResult:
        try:
            resp = self.session.post(
                f"{self.base_url}/compute", json=request.to_json(), timeout=timeout
            )
        except requests.RequestException as exc:
            raise StackUnreachable(f"compute slot unreachable: {exc}")
        if resp.status_code != 200:
            doc = resp.json()
            raise error_from_wire(doc.get("code", "InternalError"), doc.get("message", ""))
        return ComputeResult.from_json(resp.json())

    def audit(self) -> list[str]:
        try:
            resp = self.session.get(f"{self.base_url}/audit", timeout=10.0)
        except requests.RequestException as exc:
            raise StackUnreachable(f"compute slot unreachable: {exc}")
        resp.raise_for_status()
        return resp.json()["retained"]
