"""
Quotient metrics of Riemannian submersions by one-parameter isometric actions.

The total space carries a metric and a Killing field K generating the action.
A section sigma from quotient coordinates into the total space picks one
point per orbit; the quotient metric is the total metric on the
K-orthogonal part of d sigma:

    g_q = D^T G D - (D^T G K)(D^T G K)^T / <K, K>
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from src.errors import QuotientError
from src.geometry.curvature import riemann, sectional_curvature
from src.geometry.metric import Box, MetricField

logger = logging.getLogger(__name__)

VectorFn = Callable[[np.ndarray], np.ndarray]

# Killing fields and quotient eigenvalues below this (relative) count as vanishing.
_DEGENERACY = 1e-12


@dataclass(frozen=True, eq=False)
class QuotientMetricSpec:
    """
    `killing` and `section` are vectorized over leading axes; the section
    differential returns shape (..., N, m) for N total and m quotient coordinates.
    """
    name: str
    total: MetricField
    killing: VectorFn
    section: VectorFn
    section_differential: VectorFn
    quotient_dim: int
    valid_domain: Box
    curvature_flags: tuple[str, ...] = ()
    fd_step: Optional[float] = None


def _pieces(spec: QuotientMetricSpec, q: np.ndarray):
    x = np.asarray(spec.section(q), dtype=float)
    G = spec.total.at(x)
    K = np.asarray(spec.killing(x), dtype=float)
    D = np.asarray(spec.section_differential(q), dtype=float)
    GK = np.einsum("...ij,...j->...i", G, K)
    kk = np.einsum("...i,...i->...", K, GK)
    scale = np.maximum(1.0, np.max(np.abs(G), axis=(-2, -1)))
    if np.any(kk <= _DEGENERACY * scale):
        raise QuotientError(f"Killing field of '{spec.name}' vanishes along the section")
    return x, G, K, D, GK, kk


def quotient_metric(spec: QuotientMetricSpec) -> MetricField:
    """Submersion metric on the quotient chart, positive definite or QuotientError."""

    def evaluate(q):
        q = np.asarray(q, dtype=float)
        _, G, _, D, GK, kk = _pieces(spec, q)
        DGD = np.einsum("...ia,...ij,...jb->...ab", D, G, D)
        DGK = np.einsum("...ia,...i->...a", D, GK)
        g = DGD - np.einsum("...a,...b->...ab", DGK, DGK) / kk[..., None, None]
        g = 0.5 * (g + np.swapaxes(g, -1, -2))
        smallest = np.linalg.eigvalsh(g)[..., 0]
        if np.any(smallest <= _DEGENERACY * np.maximum(1.0, np.max(np.abs(g), axis=(-2, -1)))):
            raise QuotientError(f"Section of '{spec.name}' is not transverse to the orbits")
        return g

    return MetricField(
        name=spec.name,
        dim=spec.quotient_dim,
        evaluate=evaluate,
        valid_domain=spec.valid_domain,
        curvature_flags=spec.curvature_flags,
        fd_step=spec.fd_step,
    )


def horizontal_lift(spec: QuotientMetricSpec, q, w) -> np.ndarray:
    """Total-space vector at sigma(q) that is K-orthogonal and projects to w."""
    q = np.asarray(q, dtype=float)
    _, _, K, D, GK, kk = _pieces(spec, q)
    lifted = D @ np.asarray(w, dtype=float)
    return lifted - (GK @ lifted) / kk * K


def oneill_gap(spec: QuotientMetricSpec, q, w1, w2, step: Optional[float] = None) -> tuple[float, float]:
    """
    (quotient K(w1, w2), total-space K of the horizontal lifts). A Riemannian
    submersion never decreases sectional curvature.
    """
    quotient = quotient_metric(spec)
    q = np.asarray(q, dtype=float)
    Rq = riemann(quotient, quotient.point(q), step)
    kq = sectional_curvature(Rq, np.asarray(w1, dtype=float), np.asarray(w2, dtype=float))

    x = spec.total.point(spec.section(q))
    Rt = riemann(spec.total, x, step)
    kt = sectional_curvature(Rt, horizontal_lift(spec, q, w1), horizontal_lift(spec, q, w2))
    logger.debug(f"O'Neill check on '{spec.name}' at {q}: quotient K {kq:.6g}, horizontal K {kt:.6g}")
    return kq, kt
