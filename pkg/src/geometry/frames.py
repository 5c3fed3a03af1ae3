"""
Orthonormal frames in a metric inner product.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src.errors import DependentVectorsError, FrameCompletionError
from src.settings import DEFAULT_TOLERANCES


@dataclass(eq=False)
class OrthonormalFrame:
    """Columns are g-orthonormal vectors in chart coordinates."""
    columns: np.ndarray
    gram_check: float

    @property
    def size(self) -> int:
        return self.columns.shape[1]


def gram_residual(g: np.ndarray, columns: np.ndarray) -> float:
    return float(np.max(np.abs(columns.T @ g @ columns - np.eye(columns.shape[1]))))


def _check_independent(g: np.ndarray, vectors: np.ndarray, threshold: float) -> None:
    gram = vectors.T @ g @ vectors
    norms = np.sqrt(np.clip(np.diag(gram), 0.0, None))
    if np.any(norms == 0.0):
        raise DependentVectorsError("Zero vector in frame input")
    correlation = gram / np.outer(norms, norms)
    det = float(np.linalg.det(correlation))
    if det <= threshold:
        raise DependentVectorsError(f"Vectors are dependent with respect to g (scaled Gram determinant {det:.3g})")


def _gram_schmidt(g: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Modified Gram-Schmidt with one reorthogonalization sweep."""
    out = []
    for v in vectors.T:
        w = v.astype(float).copy()
        for _ in range(2):
            for e in out:
                w = w - (e @ g @ w) * e
        norm = np.sqrt(w @ g @ w)
        out.append(w / norm)
    return np.stack(out, axis=1)


def orthonormalize(g: np.ndarray, vectors: Sequence[np.ndarray]) -> OrthonormalFrame:
    """
    Gram-Schmidt in the g-inner product.

    The first vector's direction is preserved, later vectors are orthogonalized
    against the earlier ones in order.
    """
    g = np.asarray(g, dtype=float)
    columns = np.stack([np.asarray(v, dtype=float) for v in vectors], axis=1)
    _check_independent(g, columns, DEFAULT_TOLERANCES["gram_determinant"])
    frame = _gram_schmidt(g, columns)
    residual = gram_residual(g, frame)
    if residual > DEFAULT_TOLERANCES["gram_check"]:
        raise DependentVectorsError(f"Gram-Schmidt lost orthonormality (residual {residual:.3g})")
    return OrthonormalFrame(columns=frame, gram_check=residual)


def complete_frame(g: np.ndarray, leading: Sequence[np.ndarray], min_residual: float = 1e-8) -> OrthonormalFrame:
    """
    Orthonormalize `leading`, then complete to a full basis from coordinate
    directions, each time taking the direction that sticks out of the current
    span the most (lowest index on ties).
    """
    g = np.asarray(g, dtype=float)
    n = g.shape[0]
    head = orthonormalize(g, leading).columns
    out = [head[:, i] for i in range(head.shape[1])]
    while len(out) < n:
        best, best_ratio = None, 0.0
        for k in range(n):
            e = np.zeros(n)
            e[k] = 1.0
            scale = np.sqrt(e @ g @ e)
            w = e
            for _ in range(2):
                for f in out:
                    w = w - (f @ g @ w) * f
            ratio = np.sqrt(max(float(w @ g @ w), 0.0)) / scale
            if ratio > best_ratio + 1e-12:
                best, best_ratio = w, ratio
        if best is None or best_ratio <= min_residual:
            raise FrameCompletionError(f"Completed only {len(out)} of {n} frame vectors")
        out.append(best / np.sqrt(best @ g @ best))
    columns = np.stack(out, axis=1)
    residual = gram_residual(g, columns)
    if residual > DEFAULT_TOLERANCES["gram_check"]:
        raise FrameCompletionError(f"Completed frame is not orthonormal (residual {residual:.3g})")
    return OrthonormalFrame(columns=columns, gram_check=residual)
