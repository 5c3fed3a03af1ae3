"""
Riemann tensor, sectional and scalar curvature in orthonormal frames.

Convention: R(X, Y) = [nabla_X, nabla_Y] - nabla_[X,Y], so that
<R(x, y)y, x> = K(x, y) for orthonormal x, y and the unit sphere has K = +1.
Stored components are R[i, j, k, l] = <R(e_i, e_j)e_k, e_l>.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.errors import CurvatureSymmetryError, DegeneratePlaneError, SignConventionError
from src.geometry.connection import christoffel, christoffel_derivative
from src.geometry.frames import OrthonormalFrame, orthonormalize
from src.geometry.metric import Box, MetricField, Point, metric_jet
from src.sampling import random_orthonormal_pairs
from src.settings import DEFAULT_TOLERANCES

logger = logging.getLogger(__name__)

# Residuals are measured against max(max|R|, 1); on flat charts max|R| is pure stencil noise.
RESIDUAL_FLOOR = 1.0


@dataclass(eq=False)
class RiemannAtPoint:
    """Fully lowered curvature tensor in a g-orthonormal frame."""
    R: np.ndarray
    frame: OrthonormalFrame
    point: Point

    @property
    def dim(self) -> int:
        return self.R.shape[0]

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.R)))

    def to_frame_components(self, vector: np.ndarray) -> np.ndarray:
        """Components of a chart-coordinate vector in the stored frame."""
        return np.linalg.solve(self.frame.columns, np.asarray(vector, dtype=float))

    def apply(self, x: np.ndarray, y: np.ndarray, z: np.ndarray) -> np.ndarray:
        """Frame components of R(x, y)z for frame-component inputs."""
        return np.einsum("ijkl,i,j,k->l", self.R, x, y, z)

    def value(self, x: np.ndarray, y: np.ndarray, z: np.ndarray, w: np.ndarray) -> float:
        """<R(x, y)z, w> for frame-component inputs."""
        return float(np.einsum("ijkl,i,j,k,l->", self.R, x, y, z, w))


def symmetry_residuals(R: RiemannAtPoint) -> dict:
    """Relative residuals of the algebraic curvature identities."""
    t = R.R
    scale = max(R.max_abs, RESIDUAL_FLOOR)
    return {
        "antisymmetry_ij": float(np.max(np.abs(t + np.swapaxes(t, 0, 1)))) / scale,
        "antisymmetry_kl": float(np.max(np.abs(t + np.swapaxes(t, 2, 3)))) / scale,
        "pair_symmetry": float(np.max(np.abs(t - np.transpose(t, (2, 3, 0, 1))))) / scale,
        "first_bianchi": float(np.max(np.abs(
            t + np.transpose(t, (1, 2, 0, 3)) + np.transpose(t, (2, 0, 1, 3))
        ))) / scale,
    }


def coordinate_riemann(jet_g: np.ndarray, gamma: np.ndarray, dgamma: np.ndarray) -> np.ndarray:
    """
    Coordinate components <R(d_i, d_j)d_k, d_l>.

    R^m_ijk = d_i Gamma^m_jk - d_j Gamma^m_ik + Gamma^m_ip Gamma^p_jk - Gamma^m_jp Gamma^p_ik.
    """
    up = (
        np.einsum("imjk->mijk", dgamma)
        - np.einsum("jmik->mijk", dgamma)
        + np.einsum("mip,pjk->mijk", gamma, gamma)
        - np.einsum("mjp,pik->mijk", gamma, gamma)
    )
    return np.einsum("lm,mijk->ijkl", jet_g, up)


def transform(R: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Components of a (0,4) tensor on the columns of `basis`."""
    return np.einsum("ia,jb,kc,ld,ijkl->abcd", basis, basis, basis, basis, R, optimize=True)


def riemann(metric: MetricField, p: Point, step: Optional[float] = None) -> RiemannAtPoint:
    """
    Curvature tensor at p in the orthonormal frame obtained from the
    coordinate basis by Gram-Schmidt.
    """
    jet = metric_jet(metric, p, step)
    conn = christoffel(jet)
    dgamma = christoffel_derivative(jet)
    coord = coordinate_riemann(jet.g, conn.gamma, dgamma)
    frame = orthonormalize(jet.g, list(np.eye(metric.dim)))
    R = RiemannAtPoint(R=transform(coord, frame.columns), frame=frame, point=p)

    residuals = symmetry_residuals(R)
    worst = max(residuals.values())
    if worst > DEFAULT_TOLERANCES["symmetry_abort"]:
        raise CurvatureSymmetryError(
            f"Curvature of '{metric.name}' at {p.coords} violates symmetries "
            f"(worst relative residual {worst:.3g}: {residuals}); step {jet.step:.3g} too large or chart degenerate"
        )
    return R


def reframe(R: RiemannAtPoint, frame: OrthonormalFrame) -> RiemannAtPoint:
    """Re-express R in another orthonormal frame at the same point."""
    change = np.linalg.solve(R.frame.columns, frame.columns)
    return RiemannAtPoint(R=transform(R.R, change), frame=frame, point=R.point)


def sectional_curvature(R: RiemannAtPoint, x: np.ndarray, y: np.ndarray) -> float:
    """K of the plane spanned by chart-coordinate vectors x, y."""
    a = R.to_frame_components(x)
    b = R.to_frame_components(y)
    return frame_sectional_curvature(R, a, b)


def frame_sectional_curvature(R: RiemannAtPoint, a: np.ndarray, b: np.ndarray) -> float:
    aa, bb, ab = float(a @ a), float(b @ b), float(a @ b)
    area = aa * bb - ab * ab
    if aa == 0.0 or bb == 0.0:
        raise DegeneratePlaneError("Zero vector does not span a plane")
    sin_angle = np.sqrt(max(area, 0.0) / (aa * bb))
    if sin_angle < DEFAULT_TOLERANCES["plane_angle"]:
        raise DegeneratePlaneError(f"Vectors span a degenerate plane (angle {sin_angle:.3g} rad)")
    return R.value(a, b, b, a) / area


def scalar_curvature(R: RiemannAtPoint) -> float:
    """Ordered-pair sum of K(e_i, e_j), i != j."""
    return float(np.einsum("ijji->", R.R))


def sectional_matrix(R: RiemannAtPoint) -> np.ndarray:
    """K(e_i, e_j) for all frame pairs, zero on the diagonal."""
    return np.einsum("ijji->ij", R.R)


def min_sectional_curvature(R: RiemannAtPoint, samples: int = 256, seed: int = 0) -> float:
    """Minimum of K over all frame planes and `samples` random planes."""
    K = sectional_matrix(R)
    n = R.dim
    best = float(np.min(K[~np.eye(n, dtype=bool)])) if n > 1 else 0.0
    if samples > 0 and n > 1:
        rng = np.random.default_rng(seed)
        x, y = random_orthonormal_pairs(rng, samples, n)
        values = np.einsum("ijkl,si,sj,sk,sl->s", R.R, x, y, y, x, optimize=True)
        best = min(best, float(np.min(values)))
    return best


def flat_plane_lemma_residual(R: RiemannAtPoint, tol: float = 1e-8) -> float:
    """
    max |R(e_i, e_j)e_j| over frame pairs with |K(e_i, e_j)| <= tol.

    In nonnegative curvature a flat plane has R(x, y)y = 0.
    """
    K = sectional_matrix(R)
    worst = 0.0
    for i in range(R.dim):
        for j in range(R.dim):
            if i != j and abs(K[i, j]) <= tol:
                worst = max(worst, float(np.linalg.norm(R.R[i, j, j, :])))
    return worst


def _unit_sphere_metric() -> MetricField:
    def evaluate(x):
        x = np.asarray(x, dtype=float)
        g = np.zeros(x.shape[:-1] + (2, 2))
        g[..., 0, 0] = 1.0
        g[..., 1, 1] = np.sin(x[..., 0]) ** 2
        return g

    return MetricField(
        name="sign_check_s2", dim=2, evaluate=evaluate,
        valid_domain=Box.of([(0.5, 2.5), (-1.0, 1.0)]),
    )


def assert_sign_convention() -> float:
    """Unit sphere must have K = +1; raises SignConventionError otherwise."""
    metric = _unit_sphere_metric()
    R = riemann(metric, metric.point([1.1, 0.0]))
    K = float(R.R[0, 1, 1, 0])
    if abs(K - 1.0) > DEFAULT_TOLERANCES["sign_convention"]:
        raise SignConventionError(f"Unit sphere curvature is {K:.6g}, expected +1")
    return K


def assert_constant_curvature(R: RiemannAtPoint, kappa: float, tol: float, name: str) -> None:
    """Abort if frame sectional curvatures at a validation point differ from kappa."""
    K = sectional_matrix(R)
    off = ~np.eye(R.dim, dtype=bool)
    worst = float(np.max(np.abs(K[off] - kappa))) if R.dim > 1 else 0.0
    if worst > tol:
        raise SignConventionError(
            f"'{name}' has sectional curvature off by {worst:.3g} from {kappa} at {R.point.coords}"
        )
