"""Pure computational kernel: dataset summaries, Laplace perturbation,
PCA reduction, and cosine similarity ranking.

Everything here is a pure function over immutable inputs; RNG state is
caller-supplied per call, so concurrent use is safe.
"""

from agrifed.privacy.summary import SummaryVector, compute_summary, summary_dims
from agrifed.privacy.ldp import Sketch, laplace_scale, perturb, sketch_from_json, sketch_to_json
from agrifed.privacy.pca import PcaBasis, default_k, fit_pca, project
from agrifed.privacy.similarity import SimilarityRanking, SimilarityScore, rank_similar

__all__ = [
    "PcaBasis",
    "SimilarityRanking",
    "SimilarityScore",
    "Sketch",
    "SummaryVector",
    "compute_summary",
    "default_k",
    "fit_pca",
    "laplace_scale",
    "perturb",
    "project",
    "rank_similar",
    "sketch_from_json",
    "sketch_to_json",
    "summary_dims",
]
