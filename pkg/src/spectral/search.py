"""
Direct minimization of sum_i <rho v_i, v_i> over orthonormal k-frames.

The minimum equals lambda_1 + ... + lambda_k; the search reaches it without
reading the spectrum, so agreement with spectral_report is a real check.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.errors import InvalidFrameSizeError
from src.sampling import chunked_generators
from src.settings import DEFAULT_FRAME_SAMPLES, DEFAULT_REFINE_STEPS
from src.spectral.operator import CurvatureOperatorMatrix
from src.spectral.report import sorted_eigh

logger = logging.getLogger(__name__)

EIGEN_FRAME = "eigenvector-frame"
RANDOM_FRAME = "random-frame"
REFINED_FRAME = "refined-frame"

# Another candidate replaces the eigenvector frame only when strictly better by this much (relative).
_REPLACE_MARGIN = 1e-12


@dataclass(eq=False)
class FrameSearchResult:
    min_value: float
    frame: np.ndarray
    source: str
    k: int
    sample_count: int
    seed: int


def frame_sum(m: np.ndarray, frame: np.ndarray) -> float:
    return float(np.einsum("ik,ij,jk->", frame, m, frame))


def _retract(frame: np.ndarray) -> np.ndarray:
    """QR retraction of one frame or a stack of frames."""
    q, r = np.linalg.qr(frame)
    signs = np.sign(np.diagonal(r, axis1=-2, axis2=-1))
    signs[signs == 0] = 1.0
    return q * signs[..., None, :]


def _refine(m: np.ndarray, frame: np.ndarray, steps: int, lr: float) -> np.ndarray:
    """Projected gradient descent on the Stiefel manifold with QR retraction."""
    # Not scipy.optimize: iterates must stay orthonormal at every step.
    for _ in range(steps):
        mv = m @ frame
        grad = 2.0 * (mv - frame @ (frame.T @ mv))
        if float(np.max(np.abs(grad))) < 1e-15:
            break
        frame = _retract(frame - lr * grad)
    return frame


def frame_sum_min(
    op: CurvatureOperatorMatrix,
    k: int,
    sample_count: int = DEFAULT_FRAME_SAMPLES,
    seed: int = 0,
    refine_steps: int = DEFAULT_REFINE_STEPS,
) -> FrameSearchResult:
    """
    Approximate min over orthonormal k-frames of the quadratic-form sum.

    Candidates are orthonormalized Gaussian frames drawn in fixed-size seeded
    chunks, the bottom-k eigenvector frame, and Stiefel refinements of both
    the eigenvector frame and the best random frame.
    """
    N = op.size
    if not isinstance(k, (int, np.integer)) or not 1 <= k <= N:
        raise InvalidFrameSizeError(f"Frame size k={k} outside 1..{N}")
    m = op.m

    values, vectors = sorted_eigh(m)
    scale = max(1.0, float(np.max(np.abs(values))) if values.size else 0.0)
    lr = 0.25 / scale

    eigen = vectors[:, :k]
    best_frame, best_value, source = eigen, frame_sum(m, eigen), EIGEN_FRAME

    refined_eigen = _refine(m, eigen, refine_steps, lr)
    value = frame_sum(m, refined_eigen)
    if value < best_value - _REPLACE_MARGIN * scale:
        best_frame, best_value, source = refined_eigen, value, REFINED_FRAME

    random_best: Optional[np.ndarray] = None
    random_value = np.inf
    for count, rng in chunked_generators(seed, sample_count):
        q = _retract(rng.standard_normal((count, N, k)))
        sums = np.einsum("sik,ij,sjk->s", q, m, q)
        i = int(np.argmin(sums))
        if sums[i] < random_value:
            random_value, random_best = float(sums[i]), q[i]

    if random_best is not None:
        if random_value < best_value - _REPLACE_MARGIN * scale:
            best_frame, best_value, source = random_best, random_value, RANDOM_FRAME
        refined = _refine(m, random_best, refine_steps, lr)
        value = frame_sum(m, refined)
        if value < best_value - _REPLACE_MARGIN * scale:
            best_frame, best_value, source = refined, value, REFINED_FRAME

    logger.debug(f"frame_sum_min k={k}: {best_value:.6g} from {source} ({sample_count} random frames)")
    return FrameSearchResult(
        min_value=best_value, frame=best_frame, source=source, k=k, sample_count=sample_count, seed=seed,
    )


@dataclass(eq=False)
class EigenbasisOverlaps:
    alpha: np.ndarray
    column_mass: np.ndarray
    eigenvalues: np.ndarray
    weighted_sum: float
    partial_sum: float


def eigenbasis_overlaps(op: CurvatureOperatorMatrix, frame: np.ndarray) -> EigenbasisOverlaps:
    """
    alpha[i, j] = <v_i, e_j> against the ascending eigenbasis.

    The frame sum is sum_j lambda_j c_j with column masses 0 <= c_j <= 1 and
    sum_j c_j = k, hence never below lambda_1 + ... + lambda_k.
    """
    frame = np.asarray(frame, dtype=float)
    if frame.ndim != 2 or frame.shape[0] != op.size:
        raise InvalidFrameSizeError(f"Frame of shape {frame.shape} against operator of size {op.size}")
    values, vectors = sorted_eigh(op.m)
    alpha = frame.T @ vectors
    mass = np.sum(alpha**2, axis=0)
    k = frame.shape[1]
    return EigenbasisOverlaps(
        alpha=alpha,
        column_mass=mass,
        eigenvalues=values,
        weighted_sum=float(mass @ values),
        partial_sum=float(np.sum(values[:k])),
    )
