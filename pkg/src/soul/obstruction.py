"""
Splitting-obstruction detector.

If R(x, y)u != 0 for some tangent x, y and normal u at a soul point, then
with alpha = |R(x, y)u| and v = R(x, y)u / alpha the three orthonormal
bivectors

    xi1 = (x^u + y^v) / sqrt(2)
    xi2 = (x^v - y^u) / sqrt(2)
    xi3 = (x^v + y^u) / sqrt(2)

have quadratic forms -alpha/2, -alpha/2 and +alpha/2, so the curvature
operator is not 3-nonnegative there. If no such triple exists the normal
bundle is flat along the sampled point.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from src.errors import WitnessConsistencyError
from src.geometry.curvature import RiemannAtPoint, reframe
from src.sampling import chunked_generators, random_orthonormal_pairs, random_unit_vectors
from src.settings import DEFAULT_TOLERANCES, DEFAULT_WITNESS_SAMPLES
from src.soul.relations import NotApplicable
from src.soul.souls import AdaptedFrame
from src.spectral.bivectors import Bivector, wedge
from src.spectral.operator import CurvatureOperatorMatrix, curvature_operator, quadratic_form

logger = logging.getLogger(__name__)

SQRT_HALF = np.sqrt(0.5)


@dataclass(eq=False)
class ObstructionWitness:
    point: np.ndarray
    x: np.ndarray
    y: np.ndarray
    u: np.ndarray
    v: np.ndarray
    alpha: float
    xi1: Bivector
    xi2: Bivector
    xi3: Bivector
    quadratic_forms: tuple[float, float, float]
    sum_value: float
    threshold: float
    v_defect: float
    orthonormality_residual: float
    pattern_residual: float
    chart_vectors: dict

    @property
    def bivectors(self) -> tuple[Bivector, Bivector, Bivector]:
        return self.xi1, self.xi2, self.xi3


@dataclass(frozen=True)
class FlatNormalBundle:
    """No witness: max |R(x, y)u| over the search stayed below the threshold."""
    point: tuple[float, ...]
    max_alpha: float
    threshold: float
    candidates: int


def normalized_form_sum(op: CurvatureOperatorMatrix, bivectors: Sequence[Bivector]) -> float:
    """sum_i <rho b_i, b_i> / |b_i|^2."""
    return float(sum(quadratic_form(op, b) / b.inner(b) for b in bivectors))


def _search(T: np.ndarray, d: int, samples: int, seed: int) -> tuple[float, np.ndarray, np.ndarray, np.ndarray, int]:
    """Largest |R(x, y)u| over frame combinations plus random tangent pairs and unit normals."""
    n = T.shape[0]
    k = n - d
    best = (-1.0, None, None, None)
    eye = np.eye(n)
    for i in range(d):
        for j in range(i + 1, d):
            for a in range(d, n):
                alpha = float(np.linalg.norm(T[i, j, a, :]))
                if alpha > best[0]:
                    best = (alpha, eye[i], eye[j], eye[a])
    candidates = d * (d - 1) // 2 * k

    for count, rng in chunked_generators(seed, samples):
        x2, y2 = random_orthonormal_pairs(rng, count, d)
        u2 = random_unit_vectors(rng, count, k)
        x = np.zeros((count, n))
        y = np.zeros((count, n))
        u = np.zeros((count, n))
        x[:, :d], y[:, :d], u[:, d:] = x2, y2, u2
        images = np.einsum("ijkl,si,sj,sk->sl", T, x, y, u, optimize=True)
        norms = np.linalg.norm(images, axis=1)
        s = int(np.argmax(norms))
        if norms[s] > best[0]:
            best = (float(norms[s]), x[s], y[s], u[s])
        candidates += count
    alpha, x, y, u = best
    return alpha, x, y, u, candidates


def obstruction_witness(
    R: RiemannAtPoint,
    frame: AdaptedFrame,
    search_samples: int = DEFAULT_WITNESS_SAMPLES,
    seed: int = 0,
    tolerances: Optional[dict] = None,
) -> Union[ObstructionWitness, FlatNormalBundle, NotApplicable]:
    d, k = frame.tangent_dim, frame.normal_dim
    if d < 2 or k < 2:
        return NotApplicable(f"needs two tangent and two normal directions, soul has d={d}, k={k}")
    tol = {**DEFAULT_TOLERANCES, **(tolerances or {})}
    adapted = reframe(R, frame.frame)
    T = adapted.R
    threshold = tol["witness_relative"] * max(1.0, float(np.max(np.abs(T))))

    alpha, x, y, u, candidates = _search(T, d, search_samples, seed)
    if alpha <= threshold:
        logger.debug(f"Flat normal bundle at {frame.point.coords}: max alpha {alpha:.3g} <= {threshold:.3g}")
        return FlatNormalBundle(
            point=tuple(float(c) for c in frame.point.coords),
            max_alpha=alpha,
            threshold=threshold,
            candidates=candidates,
        )

    raw = adapted.apply(x, y, u) / alpha
    tangential = float(np.linalg.norm(raw[:d]))
    along_u = abs(float(raw @ u))
    defect = max(tangential, along_u)
    if defect > tol["witness_normality"]:
        raise WitnessConsistencyError(
            f"R(x,y)u is not normal and orthogonal to u at {frame.point.coords} "
            f"(tangential {tangential:.3g}, <u,v> {along_u:.3g}); curvature tensor is not a soul tensor here"
        )
    v = raw.copy()
    v[:d] = 0.0
    v -= (v @ u) * u
    v /= np.linalg.norm(v)

    xi1 = (wedge(x, u) + wedge(y, v)) * SQRT_HALF
    xi2 = (wedge(x, v) - wedge(y, u)) * SQRT_HALF
    xi3 = (wedge(x, v) + wedge(y, u)) * SQRT_HALF
    gram = np.array([[a.inner(b) for b in (xi1, xi2, xi3)] for a in (xi1, xi2, xi3)])
    ortho = float(np.max(np.abs(gram - np.eye(3))))
    if ortho > tol["witness_orthonormal"]:
        raise WitnessConsistencyError(f"Witness bivectors are not orthonormal (residual {ortho:.3g})")

    op = curvature_operator(adapted)
    forms = tuple(quadratic_form(op, b) for b in (xi1, xi2, xi3))
    expected = np.array([-0.5, -0.5, 0.5]) * alpha
    pattern = float(np.max(np.abs(np.array(forms) - expected))) / alpha

    columns = frame.frame.columns
    witness = ObstructionWitness(
        point=frame.point.coords.copy(),
        x=x, y=y, u=u, v=v,
        alpha=alpha,
        xi1=xi1, xi2=xi2, xi3=xi3,
        quadratic_forms=forms,
        sum_value=float(sum(forms)),
        threshold=threshold,
        v_defect=defect,
        orthonormality_residual=ortho,
        pattern_residual=pattern,
        chart_vectors={name: columns @ vec for name, vec in (("x", x), ("y", y), ("u", u), ("v", v))},
    )
    logger.debug(
        f"Witness at {witness.point}: alpha {alpha:.6g}, forms {[round(f, 8) for f in forms]}, "
        f"pattern residual {pattern:.3g}"
    )
    return witness
