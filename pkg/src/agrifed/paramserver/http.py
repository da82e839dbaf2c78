"""Loopback RPC for the training orchestrator.

POST /jobs submits, GET /jobs/{id} reads status, GET /jobs/{id}/result the
trained-model pointer. The orchestration tier forwards the acting user in
the X-Caller-User header; job visibility is participant-scoped.
"""

from __future__ import annotations

from agrifed.errors import Unauthorized
from agrifed.httpkit import JsonHttpService, Request
from agrifed.paramserver.jobs import TrainingJob
from agrifed.paramserver.service import ParamServer


def _caller(req: Request) -> str:
    user = req.headers.get("x-caller-user")
    if not user:
        raise Unauthorized("missing X-Caller-User")
    return user


def param_http_service(server: ParamServer) -> JsonHttpService:
    service = JsonHttpService("param-server")

    @service.route("POST", "/jobs")
    def submit(req: Request):
        doc = req.json()
        doc.setdefault("status", "queued")
        job = TrainingJob.from_doc(doc)
        if job.owner != _caller(req):
            raise Unauthorized("job owner must match the calling user")
        return 200, {"job_id": server.submit(job)}

    @service.route("GET", "/jobs/{job_id}")
    def status(req: Request):
        return 200, server.status(_caller(req), req.params["job_id"])

    @service.route("GET", "/jobs/{job_id}/result")
    def result(req: Request):
        return 200, server.result(_caller(req), req.params["job_id"])

    return service
