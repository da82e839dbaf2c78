"""Risk report assembly: attack advantage plus per-user query risk.

A user's risk grows with the number of distinct feature rows they have
probed: risk = 1 - exp(-distinct/Q0). The model's overall score combines
attack advantage and the worst user term at fixed weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from agrifed.errors import DegenerateSampleSet, NonPositiveQ0
from agrifed.risk.attack import attack_auc
from agrifed.risk.losses import LossSample
from agrifed.store.documents import InferenceLogEntry

ATTACK_WEIGHT = 0.7
QUERY_WEIGHT = 0.3
MIN_Q0 = 100.0


@dataclass(frozen=True)
class UserQueryStat:
    user: str
    query_count: int
    distinct_count: int
    risk: float

    def to_json(self) -> dict:
        return {
            "user": self.user,
            "query_count": self.query_count,
            "distinct_count": self.distinct_count,
            "risk": self.risk,
        }


@dataclass
class RiskReport:
    model_id: str
    attack_auc: float | None
    attack_advantage: float | None
    per_user: list[UserQueryStat] = field(default_factory=list)
    overall: float = 0.0
    plot_points: list[tuple[str, float]] = field(default_factory=list)
    q0: float = MIN_Q0

    def to_json(self) -> dict:
        return {
            "model_id": self.model_id,
            "attack_auc": self.attack_auc,
            "attack_advantage": self.attack_advantage,
            "per_user": [u.to_json() for u in self.per_user],
            "overall": self.overall,
            "plot_points": [[user, risk] for user, risk in self.plot_points],
            "q0": self.q0,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "RiskReport":
        return cls(
            model_id=doc["model_id"],
            attack_auc=doc["attack_auc"],
            attack_advantage=doc["attack_advantage"],
            per_user=[UserQueryStat(**u) for u in doc["per_user"]],
            overall=doc["overall"],
            plot_points=[(p[0], p[1]) for p in doc["plot_points"]],
            q0=doc.get("q0", MIN_Q0),
        )


def user_risk(distinct_count: int, q0: float) -> float:
    """1 - exp(-distinct/Q0): bounded in [0, 1), monotone in distinct_count."""
    if q0 <= 0 or not math.isfinite(q0):
        raise NonPositiveQ0("Q0 must be positive")
    if distinct_count < 0:
        raise ValueError("distinct_count must be >= 0")
    risk = -math.expm1(-distinct_count / q0)
    # keep strictly below 1.0 even where float rounding saturates
    return min(risk, math.nextafter(1.0, 0.0))


def query_stats(entries: list[InferenceLogEntry], q0: float) -> list[UserQueryStat]:
    """Aggregate a model's inference log into per-user stats."""
    counts: dict[str, int] = {}
    digests: dict[str, set] = {}
    for e in entries:
        counts[e.user] = counts.get(e.user, 0) + e.query_count
        digests.setdefault(e.user, set()).update(e.row_digests)
    return [
        UserQueryStat(
            user=user,
            query_count=counts[user],
            distinct_count=len(digests[user]),
            risk=user_risk(len(digests[user]), q0),
        )
        for user in sorted(counts)
    ]


def combine(attack_advantage: float | None, per_user: list[UserQueryStat]) -> float:
    """overall = 0.7 * advantage + 0.3 * max user risk; absent terms count 0."""
    user_term = max((u.risk for u in per_user), default=0.0)
    attack_term = attack_advantage if attack_advantage is not None else 0.0
    return ATTACK_WEIGHT * attack_term + QUERY_WEIGHT * user_term


def build_report(
    model_id: str,
    losses: list[LossSample],
    query_log: list[InferenceLogEntry],
    q0: float = MIN_Q0,
) -> RiskReport:
    """Assemble the model's risk report.

    A degenerate loss set (no members or no non-members) yields a report
    with null attack figures; the overall score then carries the user term
    only.
    """
    try:
        auc = attack_auc(losses)
        advantage = min(max(2.0 * auc - 1.0, 0.0), 1.0)
    except DegenerateSampleSet:
        auc = None
        advantage = None

    per_user = query_stats(query_log, q0)
    overall = combine(advantage, per_user)
    plot = sorted(((u.user, u.risk) for u in per_user), key=lambda p: (-p[1], p[0]))
    return RiskReport(
        model_id=model_id,
        attack_auc=auc,
        attack_advantage=advantage,
        per_user=per_user,
        overall=overall,
        plot_points=plot,
        q0=q0,
    )
