"""The only service that touches raw farm data: request-scoped compute."""

from agrifed.node.capability import mint_capability, verify_capability
from agrifed.node.service import BufferRegistry, ComputeRequest, ComputeResult, FarmerNode
from agrifed.node.client import HttpNodeClient, LocalNodeClient

__all__ = [
    "BufferRegistry",
    "ComputeRequest",
    "ComputeResult",
    "FarmerNode",
    "HttpNodeClient",
    "LocalNodeClient",
    "mint_capability",
    "verify_capability",
]
