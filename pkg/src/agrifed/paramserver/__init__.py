"""Round-by-round federated training orchestration and risk analysis."""

from agrifed.paramserver.jobs import JOB_STATUSES, TrainingJob, assert_transition
from agrifed.paramserver.service import ParamServer, ParamServerConfig
from agrifed.paramserver.client import HttpParamClient, LocalParamClient

__all__ = [
    "HttpParamClient",
    "JOB_STATUSES",
    "LocalParamClient",
    "ParamServer",
    "ParamServerConfig",
    "TrainingJob",
    "assert_transition",
]
