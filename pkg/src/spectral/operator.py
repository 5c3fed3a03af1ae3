"""
Curvature operator rho on Lambda^2 as a symmetric matrix.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.errors import DimensionMismatchError, OperatorAsymmetryError
from src.geometry.curvature import RiemannAtPoint
from src.geometry.metric import Point
from src.settings import DEFAULT_TOLERANCES
from src.spectral.bivectors import Bivector, BivectorBasis, bivector_basis


@dataclass(eq=False)
class CurvatureOperatorMatrix:
    """
    Symmetric matrix of rho. `basis` and `point` are None for operators on an
    abstract inner-product space.
    """
    m: np.ndarray
    basis: Optional[BivectorBasis] = None
    point: Optional[Point] = None

    @property
    def size(self) -> int:
        return self.m.shape[0]


def symmetric_operator(m: np.ndarray) -> CurvatureOperatorMatrix:
    """Wrap a plain symmetric matrix."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"Operator matrix must be square, got shape {m.shape}")
    return CurvatureOperatorMatrix(m=m)


def curvature_operator(R: RiemannAtPoint) -> CurvatureOperatorMatrix:
    """m[(i,j),(k,l)] = <R(e_i, e_j)e_l, e_k> on the lexicographic basis."""
    basis = bivector_basis(R.dim)
    idx = np.array(basis.pairs, dtype=int).reshape(-1, 2)
    i, j = idx[:, 0], idx[:, 1]
    m = R.R[i[:, None], j[:, None], j[None, :], i[None, :]]

    if m.size:
        scale = max(float(np.max(np.abs(m))), 1.0)
        asym = float(np.max(np.abs(m - m.T)))
        if asym > DEFAULT_TOLERANCES["operator_symmetry"] * scale:
            raise OperatorAsymmetryError(f"Curvature operator asymmetry {asym:.3g} at {R.point.coords}")
    return CurvatureOperatorMatrix(m=0.5 * (m + m.T), basis=basis, point=R.point)


def quadratic_form(op: CurvatureOperatorMatrix, b: Bivector) -> float:
    """<rho b, b>."""
    if b.coeffs.shape[0] != op.size:
        raise DimensionMismatchError(f"Bivector of size {b.coeffs.shape[0]} against operator of size {op.size}")
    return float(b.coeffs @ op.m @ b.coeffs)
