"""Clients for the training orchestrator RPC."""

from __future__ import annotations

import requests

from agrifed.errors import StackUnreachable, error_from_wire
from agrifed.paramserver.jobs import TrainingJob
from agrifed.paramserver.service import ParamServer


class LocalParamClient:
    def __init__(self, server: ParamServer):
        self.server = server

    def submit(self, caller: str, job: TrainingJob) -> str:
        return self.server.submit(job)

    def status(self, caller: str, job_id: str) -> dict:
        return self.server.status(caller, job_id)


class HttpParamClient:
    def __init__(self, base_url: str, session: requests.Session | None = None):
        self.base_url = base_url.rstrip("/")
        self.session = session or requests.Session()

    def _check(self, resp):
        if resp.status_code >= 400:
            doc = resp.json()
            raise error_from_wire(doc.get("code", "InternalError"), doc.get("message", ""))
        return resp.json()

    def submit(self, caller: str, job: TrainingJob) -> str:
        try:
            resp = self.session.post(
                f"{self.base_url}/jobs",
                json=job.to_doc(),
                headers={"X-Caller-User": caller},
                timeout=30.0,
            )
        except requests.RequestException as exc:
            raise StackUnreachable(f"orchestrator unreachable: {exc}")
        return self._check(resp)["job_id"]

    def status(self, caller: str, job_id: str) -> dict:
        try:
            resp = self.session.get(
                f"{self.base_url}/jobs/{job_id}",
                headers={"X-Caller-User": caller},
                timeout=10.0,
            )
        except requests.RequestException as exc:
            raise StackUnreachable(f"orchestrator unreachable: {exc}")
        return self._check(resp)
