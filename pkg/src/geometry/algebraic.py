"""
Algebraic curvature tensors in an orthonormal basis, without a metric chart.

Used for constant-curvature model tensors and for synthetic controls.
"""

import numpy as np

from src.geometry.curvature import RiemannAtPoint
from src.geometry.frames import OrthonormalFrame
from src.geometry.metric import Point

ALGEBRAIC_CHART = "algebraic"


def kulkarni_nomizu(h: np.ndarray, k: np.ndarray) -> np.ndarray:
    """(h o k)[i,j,k,l] = h_il k_jk + h_jk k_il - h_ik k_jl - h_jl k_ik."""
    return (
        np.einsum("il,jk->ijkl", h, k)
        + np.einsum("jk,il->ijkl", h, k)
        - np.einsum("ik,jl->ijkl", h, k)
        - np.einsum("jl,ik->ijkl", h, k)
    )


def constant_curvature_tensor(n: int, kappa: float = 1.0) -> np.ndarray:
    """R(x, y)z = kappa (<y, z>x - <x, z>y)."""
    return 0.5 * kappa * kulkarni_nomizu(np.eye(n), np.eye(n))


def random_curvature_tensor(n: int, rng: np.random.Generator, terms: int = 3) -> np.ndarray:
    """Sum of Kulkarni-Nomizu squares of random symmetric matrices; satisfies first Bianchi."""
    R = np.zeros((n, n, n, n))
    for _ in range(terms):
        a = rng.standard_normal((n, n))
        h = 0.5 * (a + a.T)
        R += 0.5 * kulkarni_nomizu(h, h)
    return R


def algebraic_riemann(R: np.ndarray) -> RiemannAtPoint:
    """Wrap an algebraic tensor with the identity frame at the origin."""
    n = R.shape[0]
    return RiemannAtPoint(
        R=np.asarray(R, dtype=float),
        frame=OrthonormalFrame(columns=np.eye(n), gram_check=0.0),
        point=Point(coords=np.zeros(n), chart_id=ALGEBRAIC_CHART),
    )
