"""Membership-inference and query-risk quantification for trained models."""

from agrifed.risk.losses import LossSample, collect_losses
from agrifed.risk.attack import attack_auc
from agrifed.risk.report import (
    ATTACK_WEIGHT,
    QUERY_WEIGHT,
    RiskReport,
    UserQueryStat,
    build_report,
    user_risk,
)

__all__ = [
    "ATTACK_WEIGHT",
    "LossSample",
    "QUERY_WEIGHT",
    "RiskReport",
    "UserQueryStat",
    "attack_auc",
    "build_report",
    "collect_losses",
    "user_risk",
]
