"""Cosine ranking of peers in projected sketch space."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from agrifed.privacy.ldp import Sketch
from agrifed.privacy.pca import PcaBasis, project


@dataclass(frozen=True)
class SimilarityScore:
    peer: str
    score: float  # cosine, in [-1, 1]


@dataclass
class SimilarityRanking:
    scores: list[SimilarityScore] = field(default_factory=list)
    excluded: list[str] = field(default_factory=list)  # schema-mismatched peers


def _cosine(a: np.ndarray, b: np.ndarray) -> float:
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.clip(float(a @ b) / (na * nb), -1.0, 1.0))


def rank_similar(
    initiator: Sketch,
    candidates: list[tuple[str, Sketch]],
    basis: PcaBasis,
) -> SimilarityRanking:
    """Rank candidates by cosine similarity to the initiator.

    Only candidates sharing the initiator's schema are comparable; others
    are excluded and reported in the result metadata. Output is sorted by
    score descending, ties broken by username ascending. An empty candidate
    list yields an empty ranking.
    """
    ranking = SimilarityRanking()
    if not candidates:
        return ranking

    q = np.asarray(project(initiator, basis).projected, dtype=float)
    scored: list[SimilarityScore] = []
    for username, sketch in candidates:
        if sketch.schema_hash != initiator.schema_hash:
            ranking.excluded.append(username)
            continue
        p = np.asarray(project(sketch, basis).projected, dtype=float)
        scored.append(SimilarityScore(peer=username, score=_cosine(q, p)))

    scored.sort(key=lambda s: (-s.score, s.peer))
    ranking.scores = scored
    return ranking
