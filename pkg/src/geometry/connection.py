"""
Levi-Civita connection coefficients and their coordinate derivatives.
"""

from dataclasses import dataclass

import numpy as np

from src.errors import SingularMetricError
from src.geometry.metric import MetricJet

# Condition numbers above this are treated as a singular chart.
MAX_CONDITION = 1e12


@dataclass(eq=False)
class ConnectionCoefficients:
    """gamma[k, i, j] = Gamma^k_ij."""
    gamma: np.ndarray
    condition_number: float

    def symmetry_residual(self) -> float:
        return float(np.max(np.abs(self.gamma - np.swapaxes(self.gamma, 1, 2))))


def _inverse(g: np.ndarray) -> tuple[np.ndarray, float]:
    try:
        np.linalg.cholesky(g)
    except np.linalg.LinAlgError as e:
        raise SingularMetricError(f"Metric matrix is not positive definite: {e}") from e
    cond = float(np.linalg.cond(g))
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise SingularMetricError(f"Metric matrix is singular (condition number {cond:.3g})")
    return np.linalg.inv(g), cond


def _lowered_sum(dg: np.ndarray) -> np.ndarray:
    """S[l, i, j] = d_i g_jl + d_j g_il - d_l g_ij."""
    return np.einsum("ijl->lij", dg) + np.einsum("jil->lij", dg) - dg


def christoffel(jet: MetricJet) -> ConnectionCoefficients:
    """Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij)."""
    g_inv, cond = _inverse(jet.g)
    gamma = 0.5 * np.einsum("kl,lij->kij", g_inv, _lowered_sum(jet.dg))
    return ConnectionCoefficients(gamma=gamma, condition_number=cond)


def christoffel_derivative(jet: MetricJet) -> np.ndarray:
    """
    dgamma[m, k, i, j] = d_m Gamma^k_ij.

    Differentiates the Levi-Civita formula with d_m g^kl = -g^ka d_m g_ab g^bl.
    """
    g_inv, _ = _inverse(jet.g)
    s = _lowered_sum(jet.dg)
    # d_m S[l, i, j] from d2g[m, a, b, c] = d_m d_a g_bc
    ds = np.einsum("mijl->mlij", jet.d2g) + np.einsum("mjil->mlij", jet.d2g) - jet.d2g
    dg_inv = -np.einsum("ka,mab,bl->mkl", g_inv, jet.dg, g_inv)
    return 0.5 * (np.einsum("mkl,lij->mkij", dg_inv, s) + np.einsum("kl,mlij->mkij", g_inv, ds))
