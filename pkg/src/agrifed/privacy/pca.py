"""PCA over noised sketches.

The basis is fit on already-perturbed vectors at the coordinator, so raw
summaries never leave their owner's compute slot. Implementation goes
through the SVD of the centered data matrix; eigenvalues of the sample
covariance (ddof=1) are recovered from the singular values.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from agrifed.errors import DimensionMismatch, InsufficientSamples, NonPositiveArgument
from agrifed.privacy.ldp import Sketch

_ZERO_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class PcaBasis:
    components: np.ndarray  # (k, d), rows orthonormal
    mean: np.ndarray  # (d,)
    k: int
    explained_variance: np.ndarray  # (k,), non-increasing
    rank_deficient: bool = False

    @property
    def d(self) -> int:
        return self.mean.shape[0]


def default_k(d: int, count: int) -> int:
    """Component count used by the platform: min(8, d, count - 1)."""
    return min(8, d, count - 1)


def _fix_signs(components: np.ndarray) -> np.ndarray:
    """First nonzero entry of each component made non-negative, for
    reproducibility across eigen-solvers."""
    fixed = components.copy()
    for i, row in enumerate(fixed):
        nz = np.flatnonzero(np.abs(row) > _ZERO_TOL)
        if nz.size and row[nz[0]] < 0:
            fixed[i] = -row
    return fixed


def fit_pca(sketches: list[Sketch], k: int) -> PcaBasis:
    """Mean and top-k principal directions of the noised vectors.

    Eigenvalues are reported non-increasing. If fewer than k directions
    carry variance, the basis is padded with an (arbitrary) orthonormal
    completion and flagged rank_deficient.
    """
    if len(sketches) < 2:
        raise InsufficientSamples("PCA needs at least 2 sketches")
    d = sketches[0].dims
    schema = sketches[0].schema_hash
    for s in sketches:
        if s.dims != d:
            raise DimensionMismatch(f"sketch dims {s.dims} != {d}")
        if s.schema_hash != schema:
            raise DimensionMismatch("sketches with differing schemas are not comparable")
    n = len(sketches)
    if k < 1:
        raise NonPositiveArgument("k must be >= 1")
    if k > d:
        raise DimensionMismatch(f"k={k} exceeds dimension {d}")
    if k > n - 1:
        raise InsufficientSamples(f"k={k} needs at least {k + 1} sketches, have {n}")

    x = np.array([s.noised for s in sketches], dtype=float)
    mean = x.mean(axis=0)
    centered = x - mean

    # full_matrices=True keeps an orthonormal completion beyond the data rank
    _, singular, vt = np.linalg.svd(centered, full_matrices=True)
    eigenvalues = np.zeros(d)
    eigenvalues[: singular.size] = singular**2 / (n - 1)

    scale = max(1.0, float(eigenvalues[0]) if eigenvalues.size else 1.0)
    rank = int(np.sum(eigenvalues > _ZERO_TOL * scale))

    components = _fix_signs(vt[:k])
    return PcaBasis(
        components=components,
        mean=mean,
        k=k,
        explained_variance=eigenvalues[:k],
        rank_deficient=rank < k,
    )


def project(sketch: Sketch, basis: PcaBasis) -> Sketch:
    """Project a sketch onto the basis: components @ (noised - mean)."""
    if sketch.dims != basis.d:
        raise DimensionMismatch(f"sketch dims {sketch.dims} != basis dimension {basis.d}")
    coords = basis.components @ (np.asarray(sketch.noised, dtype=float) - basis.mean)
    return replace(sketch, projected=tuple(float(v) for v in coords))
