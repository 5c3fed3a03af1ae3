"""
Curvature relations that hold at every point of a soul.

All functions take the curvature tensor and an adapted frame at the same
point and work on frame components: indices [0, d) are tangent to the soul
and [d, n) are normal.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from src.geometry.curvature import RiemannAtPoint, reframe
from src.sampling import chunked_generators, random_orthonormal_pairs
from src.settings import DEFAULT_INEQ13_SAMPLES, DEFAULT_TOLERANCES, NORM_CONSTANT_C
from src.soul.souls import AdaptedFrame

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NotApplicable:
    """Returned instead of a result when the soul has too few tangent or normal directions."""
    reason: str


@dataclass(frozen=True)
class TraceInequality:
    lhs: float
    rhs_31: float
    s_M: float
    slack_31: float
    slack_32: float


@dataclass(eq=False)
class RelationReport:
    point: np.ndarray
    mixed_plane_max_K: float
    flat_plane_residual: float
    eq11_residual: float
    ineq13_min_slack: Optional[float]
    trace: TraceInequality
    tolerances: dict = field(default_factory=dict)

    @property
    def trace_ineq_slack(self) -> float:
        return min(self.trace.slack_31, self.trace.slack_32)

    def violations(self) -> list[str]:
        """Relations that fail at this point, as readable findings."""
        t = self.tolerances
        out = []
        if self.mixed_plane_max_K > t["mixed_plane"]:
            out.append(f"mixed-plane curvature {self.mixed_plane_max_K:.3g} > {t['mixed_plane']}")
        if self.flat_plane_residual > t["flat_plane"]:
            out.append(f"flat-plane residual {self.flat_plane_residual:.3g} > {t['flat_plane']}")
        if self.eq11_residual > t["eq11"]:
            out.append(f"R(x,y)u = 2R(x,u)y residual {self.eq11_residual:.3g} > {t['eq11']}")
        if self.ineq13_min_slack is not None and self.ineq13_min_slack < -t["ineq13"]:
            out.append(f"9/4 inequality slack {self.ineq13_min_slack:.3g} < 0")
        if self.trace.slack_31 < -t["trace_slack"]:
            out.append(f"traced inequality slack {self.trace.slack_31:.3g} < 0")
        if self.trace.slack_32 < -t["trace_slack"]:
            out.append(f"scalar-curvature bound slack {self.trace.slack_32:.3g} < 0")
        return out


def _adapted(R: RiemannAtPoint, frame: AdaptedFrame) -> np.ndarray:
    return reframe(R, frame.frame).R


def mixed_plane_max_K(T: np.ndarray, d: int) -> float:
    if d == 0 or d == T.shape[0]:
        return 0.0
    K = np.einsum("ijji->ij", T)[:d, d:]
    return float(np.max(np.abs(K)))


def flat_plane_residual(T: np.ndarray, d: int) -> float:
    """max |R(x_i, u_a)u_a| and |R(u_a, x_i)x_i| over mixed frame pairs."""
    n = T.shape[0]
    if d == 0 or d == n:
        return 0.0
    i = np.arange(d)[:, None]
    a = np.arange(d, n)[None, :]
    tangent_first = np.linalg.norm(T[i, a, a, :], axis=-1)
    normal_first = np.linalg.norm(T[a, i, i, :], axis=-1)
    return float(max(np.max(tangent_first), np.max(normal_first)))


def eq11_residual(T: np.ndarray, d: int) -> float:
    """
    max |R(x_i, x_j)u_a - 2R(x_i, u_a)x_j| and |R(u_a, u_b)x_i - 2R(u_a, x_i)u_b|.

    Both sides are trilinear, so frame vectors cover every combination.
    """
    n = T.shape[0]
    if d == 0 or d == n:
        return 0.0
    tan, nor = slice(0, d), slice(d, n)
    first = T[tan, tan, nor, :] - 2.0 * np.transpose(T[tan, nor, tan, :], (0, 2, 1, 3))
    second = T[nor, nor, tan, :] - 2.0 * np.transpose(T[nor, tan, nor, :], (0, 2, 1, 3))
    return float(max(np.max(np.linalg.norm(first, axis=-1)), np.max(np.linalg.norm(second, axis=-1))))


def _embed(vectors: np.ndarray, n: int, offset: int) -> np.ndarray:
    out = np.zeros((vectors.shape[0], n))
    out[:, offset:offset + vectors.shape[1]] = vectors
    return out


def inequality_13(
    R: RiemannAtPoint, frame: AdaptedFrame, samples: int = DEFAULT_INEQ13_SAMPLES, seed: int = 0,
) -> Union[float, NotApplicable]:
    """
    min over sampled orthonormal tangent (x, y) and normal (u, v) of
    K(x, y) K(u, v) - (9/4) <R(x, y)u, v>^2.
    """
    d, k = frame.tangent_dim, frame.normal_dim
    if d < 2 or k < 2:
        return NotApplicable(f"needs two tangent and two normal directions, soul has d={d}, k={k}")
    T = _adapted(R, frame)
    n = d + k
    best = np.inf
    for count, rng in chunked_generators(seed, samples):
        x, y = random_orthonormal_pairs(rng, count, d)
        u, v = random_orthonormal_pairs(rng, count, k)
        x, y = _embed(x, n, 0), _embed(y, n, 0)
        u, v = _embed(u, n, d), _embed(v, n, d)
        kxy = np.einsum("ijkl,si,sj,sk,sl->s", T, x, y, y, x, optimize=True)
        kuv = np.einsum("ijkl,si,sj,sk,sl->s", T, u, v, v, u, optimize=True)
        mixed = np.einsum("ijkl,si,sj,sk,sl->s", T, x, y, u, v, optimize=True)
        best = min(best, float(np.min(kxy * kuv - 2.25 * mixed**2)))
    return best


@dataclass(eq=False)
class ExpansionForm:
    """2x2 form Q with <R(e, f)f, e> = (ac, bd) Q (ac, bd)^T for e = ax + bu, f = cy + dv."""
    Q: np.ndarray
    min_eigenvalue: float


def expansion_form(R: RiemannAtPoint, frame: AdaptedFrame) -> Union[ExpansionForm, NotApplicable]:
    """Form on the first two tangent and first two normal frame vectors."""
    d, k = frame.tangent_dim, frame.normal_dim
    if d < 2 or k < 2:
        return NotApplicable(f"needs two tangent and two normal directions, soul has d={d}, k={k}")
    T = _adapted(R, frame)
    x, y, u, v = 0, 1, d, d + 1
    off = 1.5 * T[x, y, v, u]
    Q = np.array([[T[x, y, y, x], off], [off, T[u, v, v, u]]])
    return ExpansionForm(Q=Q, min_eigenvalue=float(np.linalg.eigvalsh(Q)[0]))


def expansion_residual(
    R: RiemannAtPoint, frame: AdaptedFrame, samples: int = 64, seed: int = 0,
) -> Union[float, NotApplicable]:
    """Largest gap between the expansion form and direct evaluation, relative to max|R|."""
    form = expansion_form(R, frame)
    if isinstance(form, NotApplicable):
        return form
    T = _adapted(R, frame)
    n, d = T.shape[0], frame.tangent_dim
    worst = 0.0
    for count, rng in chunked_generators(seed, samples):
        a, b, c, w = rng.standard_normal((4, count))
        e = np.zeros((count, n))
        f = np.zeros((count, n))
        e[:, 0], e[:, d] = a, b
        f[:, 1], f[:, d + 1] = c, w
        direct = np.einsum("ijkl,si,sj,sk,sl->s", T, e, f, f, e, optimize=True)
        z = np.stack([a * c, b * w], axis=1)
        predicted = np.einsum("si,ij,sj->s", z, form.Q, z)
        worst = max(worst, float(np.max(np.abs(direct - predicted))))
    return worst / max(1.0, float(np.max(np.abs(T))))


def trace_inequality(R: RiemannAtPoint, frame: AdaptedFrame) -> TraceInequality:
    """
    |R^nabla|^2 summed over all ordered tangent (i, j) and normal (k, l)
    against (4/9) A B and c s_M^2, where A and B are the ordered-pair
    curvature sums of the tangent and normal blocks.
    """
    T = _adapted(R, frame)
    d = frame.tangent_dim
    n = T.shape[0]
    lhs = float(np.sum(T[:d, :d, d:, d:] ** 2))
    K = np.einsum("ijji->ij", T)
    A = float(np.sum(K[:d, :d]))
    B = float(np.sum(K[d:n, d:n]))
    rhs = 4.0 / 9.0 * A * B
    s = float(np.einsum("ijji->", T))
    return TraceInequality(
        lhs=lhs, rhs_31=rhs, s_M=s, slack_31=rhs - lhs, slack_32=NORM_CONSTANT_C * s * s - lhs,
    )


def pointwise_relations(
    R: RiemannAtPoint,
    frame: AdaptedFrame,
    samples: int = DEFAULT_INEQ13_SAMPLES,
    seed: int = 0,
    tolerances: Optional[dict] = None,
) -> RelationReport:
    """All soul relations at one point; violations are recorded, never raised."""
    T = _adapted(R, frame)
    d = frame.tangent_dim
    ineq = inequality_13(R, frame, samples, seed)
    report = RelationReport(
        point=frame.point.coords.copy(),
        mixed_plane_max_K=mixed_plane_max_K(T, d),
        flat_plane_residual=flat_plane_residual(T, d),
        eq11_residual=eq11_residual(T, d),
        ineq13_min_slack=None if isinstance(ineq, NotApplicable) else ineq,
        trace=trace_inequality(R, frame),
        tolerances={**DEFAULT_TOLERANCES, **(tolerances or {})},
    )
    logger.debug(
        f"Relations at {report.point}: mixed K {report.mixed_plane_max_K:.3g}, "
        f"eq11 {report.eq11_residual:.3g}, 9/4 slack {report.ineq13_min_slack}"
    )
    return report
