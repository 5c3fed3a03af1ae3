"""
Spectral k-nonnegativity reports.

rho is k-nonnegative (k-positive) when every sum of k eigenvalues is >= 0
(> 0), i.e. when the k smallest eigenvalues already sum to >= 0 (> 0).
"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from src.errors import SpectralError
from src.settings import DEFAULT_TOLERANCES
from src.spectral.operator import CurvatureOperatorMatrix


@dataclass(frozen=True)
class KVerdict:
    k: int
    partial_sum: float
    nonnegative: bool
    positive: bool


@dataclass(eq=False)
class SpectralReport:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    partial_sums: np.ndarray
    verdicts: tuple[KVerdict, ...]
    tolerance: float

    def verdict(self, k: int) -> KVerdict:
        return self.verdicts[k - 1]

    def is_k_nonnegative(self, k: int) -> bool:
        return self.verdict(k).nonnegative


def default_tolerance(eigenvalues: np.ndarray) -> float:
    radius = float(np.max(np.abs(eigenvalues))) if eigenvalues.size else 0.0
    return DEFAULT_TOLERANCES["verdict_relative"] * max(1.0, radius)


def sorted_eigh(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Ascending eigenpairs with a deterministic sign convention: the first
    component of each eigenvector above 1e-12 in magnitude is positive.
    """
    try:
        values, vectors = scipy.linalg.eigh(0.5 * (m + m.T))
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError, ValueError) as e:
        raise SpectralError(f"Symmetric eigensolver failed: {e}") from e
    if not (np.all(np.isfinite(values)) and np.all(np.isfinite(vectors))):
        raise SpectralError("Symmetric eigensolver returned non-finite values")
    order = np.argsort(values, kind="stable")
    values, vectors = values[order], vectors[:, order]
    for c in range(vectors.shape[1]):
        nonzero = np.flatnonzero(np.abs(vectors[:, c]) > 1e-12)
        if nonzero.size and vectors[nonzero[0], c] < 0:
            vectors[:, c] = -vectors[:, c]
    return values, vectors


def spectral_report(op: CurvatureOperatorMatrix, tolerance: Optional[float] = None) -> SpectralReport:
    values, vectors = sorted_eigh(op.m)
    tol = default_tolerance(values) if tolerance is None else float(tolerance)
    partial = np.cumsum(values)
    verdicts = tuple(
        KVerdict(k=k + 1, partial_sum=float(s), nonnegative=bool(s >= -tol), positive=bool(s > tol))
        for k, s in enumerate(partial)
    )
    return SpectralReport(
        eigenvalues=values, eigenvectors=vectors, partial_sums=partial, verdicts=verdicts, tolerance=tol,
    )


@dataclass(frozen=True)
class RegionVerdict:
    k: int
    nonnegative_everywhere: bool
    positive_everywhere: bool
    worst_partial_sum: float
    worst_point: int


def region_verdicts(reports: Sequence[SpectralReport]) -> list[RegionVerdict]:
    """
    Aggregate per-point reports over a sampled region: a verdict holds on the
    region when it holds at every sampled point.
    """
    if not reports:
        return []
    N = min(len(r.verdicts) for r in reports)
    out = []
    for k in range(1, N + 1):
        sums = [r.verdict(k).partial_sum for r in reports]
        worst = int(np.argmin(sums))
        out.append(RegionVerdict(
            k=k,
            nonnegative_everywhere=all(r.verdict(k).nonnegative for r in reports),
            positive_everywhere=all(r.verdict(k).positive for r in reports),
            worst_partial_sum=float(sums[worst]),
            worst_point=worst,
        ))
    return out
