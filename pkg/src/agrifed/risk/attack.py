"""Loss-threshold membership attack, scored as an AUC.

Attack score is the negated loss (members train to lower loss). The AUC is
computed by the Mann-Whitney rank statistic with midranks for ties, which
equals the pairwise probability P(score_member > score_nonmember) +
P(equal)/2. All intermediate quantities are dyadic rationals, so the result
matches an exact pairwise count bit-for-bit.
"""

from __future__ import annotations

from agrifed.errors import DegenerateSampleSet
from agrifed.risk.losses import LossSample


def _midranks(values: list[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        # tied block [i, j] shares the average of ranks i+1 .. j+1
        avg = (i + j + 2) / 2
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def attack_auc(samples: list[LossSample]) -> float:
    """AUC of the loss-threshold attack; 0.5 means no leakage."""
    scores = [-s.loss for s in samples]
    members = [s.member for s in samples]
    n_pos = sum(members)
    n_neg = len(samples) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DegenerateSampleSet("need at least one member and one non-member loss")

    ranks = _midranks(scores)
    rank_sum = sum(r for r, m in zip(ranks, members) if m)
    u = rank_sum - n_pos * (n_pos + 1) / 2
    return u / (n_pos * n_neg)
