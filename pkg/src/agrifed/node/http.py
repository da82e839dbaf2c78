"""Loopback RPC adapter for the compute slot: POST /compute, GET /audit."""

from __future__ import annotations

from agrifed.httpkit import JsonHttpService, Request
from agrifed.node.service import ComputeRequest, FarmerNode


def node_http_service(node: FarmerNode) -> JsonHttpService:
    service = JsonHttpService("farmer-node")

    @service.route("POST", "/compute")
    def compute(req: Request):
        result = node.handle(ComputeRequest.from_json(req.json()))
        return 200, result.to_json()

    @service.route("GET", "/audit")
    def audit(req: Request):
        return 200, {"retained": node.audit_state()}

    return service
