"""
Verification suites. Each suite runs one family of checks on one zoo entry
and returns its numbers plus the expectations that failed (findings).
"""

import logging
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from src.errors import DegeneratePlaneError
from src.geometry.curvature import (
    flat_plane_lemma_residual,
    min_sectional_curvature,
    reframe,
    riemann,
    scalar_curvature,
    sectional_curvature,
    sectional_matrix,
    symmetry_residuals,
)
from src.geometry.frames import orthonormalize
from src.geometry.metric import FINITE_DIFFERENCE, metric_jet
from src.norms.euler import euler_report
from src.norms.report import norm_inequality_report
from src.runner.config import RunConfig
from src.soul.obstruction import FlatNormalBundle, ObstructionWitness, obstruction_witness
from src.soul.relations import NotApplicable, expansion_form, expansion_residual, pointwise_relations
from src.soul.souls import soul_curvature
from src.spectral.operator import curvature_operator
from src.spectral.report import region_verdicts, spectral_report
from src.spectral.search import eigenbasis_overlaps, frame_sum_min
from src.zoo.catalog import ZooEntry

logger = logging.getLogger(__name__)

FLAT_NORMAL_BUNDLE = "flat normal bundle"
OBSTRUCTION_FOUND = "obstruction witness"


@dataclass(eq=False)
class SuiteResult:
    suite: str
    entry: str
    results: dict = field(default_factory=dict)
    findings: list[str] = field(default_factory=list)
    skipped: Optional[str] = None
    runtime: Optional[float] = None

    def fail(self, message: str) -> None:
        self.findings.append(f"{self.entry}/{self.suite}: {message}")


def _step(entry: ZooEntry, config: RunConfig) -> Optional[float]:
    return config.fd_step if config.fd_step is not None else entry.hints.step


def _relative(value: float, scale: float) -> float:
    return abs(value) / max(1.0, abs(scale))


def run_identities(entry: ZooEntry, config: RunConfig, out: SuiteResult) -> None:
    tol = config.effective_tolerances()
    metric = entry.metric
    step = _step(entry, config)
    expected = entry.expected
    points = entry.sample_points(config.point_count, config.seed)
    rows = []
    for i, coords in enumerate(points):
        p = metric.point(coords)
        R = riemann(metric, p, step)
        residuals = symmetry_residuals(R)
        s = scalar_curvature(R)
        row = {
            "point": coords,
            "max_abs": R.max_abs,
            "residuals": residuals,
            "scalar_curvature": s,
            "min_sectional": min_sectional_curvature(R, samples=64, seed=config.seed + i),
        }

        worst = max(residuals.values())
        if worst > tol["symmetry"]:
            out.fail(f"symmetry residual {worst:.3g} at {coords}")
        if expected.flat and R.max_abs > tol["flat_max_abs"]:
            out.fail(f"flat entry has max|R| {R.max_abs:.3g} at {coords}")
        if expected.constant_curvature is not None and metric.dim > 1:
            kappa = expected.constant_curvature
            K = sectional_matrix(R)[~np.eye(metric.dim, dtype=bool)]
            off = float(np.max(np.abs(K - kappa)))
            if off > tol["constant_curvature"]:
                out.fail(f"sectional curvature off constant {kappa} by {off:.3g} at {coords}")
            target = metric.dim * (metric.dim - 1) * kappa
            if abs(s - target) > tol["scalar_curvature"]:
                out.fail(f"scalar curvature {s:.8g} != {target} at {coords}")
        if expected.nonnegative:
            if row["min_sectional"] < -tol["nonnegative_sectional"]:
                out.fail(f"negative sectional curvature {row['min_sectional']:.3g} at {coords}")
            row["flat_plane_lemma"] = flat_plane_lemma_residual(R, tol["flat_plane"])
            if row["flat_plane_lemma"] > tol["flat_plane"]:
                out.fail(f"flat plane with R(x,y)y = {row['flat_plane_lemma']:.3g} at {coords}")

        # Scalar curvature from a frame built in reverse coordinate order.
        g = metric.at(coords)
        other = orthonormalize(g, list(np.eye(metric.dim)[::-1]))
        s_other = scalar_curvature(reframe(R, other))
        row["frame_independence"] = _relative(s_other - s, s)
        if row["frame_independence"] > tol["frame_independence"]:
            out.fail(f"scalar curvature depends on the frame ({row['frame_independence']:.3g}) at {coords}")

        if metric.analytic_dg is not None:
            analytic = metric_jet(metric, p, step)
            fd = metric_jet(replace(metric, derivative_mode=FINITE_DIFFERENCE), p, step)
            scale = max(1.0, float(np.max(np.abs(analytic.d2g))), float(np.max(np.abs(analytic.dg))))
            gap = max(float(np.max(np.abs(analytic.dg - fd.dg))), float(np.max(np.abs(analytic.d2g - fd.d2g)))) / scale
            row["analytic_fd_gap"] = gap
            if gap > tol["analytic_fd"]:
                out.fail(f"analytic and finite-difference jets differ by {gap:.3g} at {coords}")

        if expected.far_field_radius is not None:
            r = float(entry.fiber_radius(coords)[0])
            if r > expected.far_field_radius + 0.05:
                row["far_field_radial_K"] = _radial_curvatures(entry, R, coords)
                worst_radial = max(abs(k) for k in row["far_field_radial_K"])
                if worst_radial > tol["far_field_flat"]:
                    out.fail(f"radial plane curvature {worst_radial:.3g} outside the cap at {coords}")
        rows.append(row)

    out.results = {
        "points": rows,
        "worst_symmetry_residual": max(max(r["residuals"].values()) for r in rows),
        "max_abs": max(r["max_abs"] for r in rows),
        "min_sectional": min(r["min_sectional"] for r in rows),
    }


def _radial_curvatures(entry: ZooEntry, R, coords: np.ndarray) -> list[float]:
    """K of planes spanned by the fiber radial direction and each other chart direction."""
    a, b = entry.fiber_axes
    n = entry.metric.dim
    radial = np.zeros(n)
    radial[a], radial[b] = coords[a], coords[b]
    angular = np.zeros(n)
    angular[a], angular[b] = -coords[b], coords[a]
    others = [np.eye(n)[i] for i in range(n) if i not in (a, b)] + [angular]
    values = []
    for w in others:
        try:
            values.append(sectional_curvature(R, radial, w))
        except DegeneratePlaneError:
            continue
    return values


def run_spectral(entry: ZooEntry, config: RunConfig, out: SuiteResult) -> None:
    tol = config.effective_tolerances()
    metric = entry.metric
    step = _step(entry, config)
    points = entry.sample_points(config.point_count, config.seed)
    rows, reports = [], []
    for i, coords in enumerate(points):
        R = riemann(metric, metric.point(coords), step)
        op = curvature_operator(R)
        if op.size == 0:
            continue
        report = spectral_report(op)
        reports.append(report)

        diag_gap = float(np.max(np.abs(
            np.diag(op.m) - np.array([R.R[p, q, q, p] for p, q in op.basis.pairs])
        )))
        trace_gap = abs(float(np.trace(op.m)) - 0.5 * scalar_curvature(R))
        if diag_gap > tol["operator_symmetry"] * max(1.0, R.max_abs):
            out.fail(f"<rho(e_i^e_j), e_i^e_j> differs from K(e_i, e_j) by {diag_gap:.3g} at {coords}")
        if trace_gap > tol["operator_symmetry"] * max(1.0, R.max_abs) * op.size:
            out.fail(f"trace of rho differs from s/2 by {trace_gap:.3g} at {coords}")

        searches = []
        for k in range(1, op.size + 1):
            found = frame_sum_min(op, k, config.frame_samples, config.seed + 1000 * i + k)
            partial = float(report.partial_sums[k - 1])
            gap = found.min_value - partial
            if abs(gap) > tol["ky_fan"] * max(1.0, abs(partial)):
                out.fail(f"frame search for k={k} gives {found.min_value:.8g}, eigenvalues give {partial:.8g}")
            if (found.min_value >= -report.tolerance) != report.verdict(k).nonnegative:
                out.fail(f"{k}-nonnegativity verdicts disagree at {coords}")
            searches.append({"k": k, "min_value": found.min_value, "source": found.source})
        bottom = eigenbasis_overlaps(op, frame_sum_min(op, min(3, op.size), 0, config.seed).frame)

        row = {
            "point": coords,
            "eigenvalues": report.eigenvalues,
            "partial_sums": report.partial_sums,
            "verdicts": [{"k": v.k, "nonnegative": v.nonnegative, "positive": v.positive} for v in report.verdicts],
            "frame_search": searches,
            "bottom_frame_column_mass": bottom.column_mass,
        }
        if entry.expected.constant_curvature is not None:
            off = float(np.max(np.abs(op.m - entry.expected.constant_curvature * np.eye(op.size))))
            row["constant_operator_gap"] = off
            if off > tol["constant_curvature"]:
                out.fail(f"operator differs from {entry.expected.constant_curvature} Id by {off:.3g} at {coords}")

        far = entry.expected.far_field_radius
        if far is not None and float(entry.fiber_radius(coords)[0]) > far + 0.05:
            relaxed = spectral_report(op, tolerance=tol["far_field_flat"] * max(1.0, float(np.max(np.abs(report.eigenvalues)))))
            row["far_field_nonnegative"] = relaxed.verdict(1).nonnegative
            if not relaxed.verdict(1).nonnegative:
                out.fail(f"curvature operator not nonnegative outside the cap at {coords}")
        rows.append(row)

    region = region_verdicts(reports)
    out.results = {
        "points": rows,
        "region": [
            {"k": r.k, "nonnegative_everywhere": r.nonnegative_everywhere,
             "positive_everywhere": r.positive_everywhere, "worst_partial_sum": r.worst_partial_sum,
             "worst_point": r.worst_point}
            for r in region
        ],
    }

    if entry.soul is not None and entry.expected.expected_split is False:
        soul_rows = []
        for param in entry.soul_params():
            R, _ = soul_curvature(entry.soul, param, step)
            report = spectral_report(curvature_operator(R))
            three = report.verdict(3).nonnegative if len(report.verdicts) >= 3 else None
            soul_rows.append({"param": param, "three_nonnegative": three, "partial_sums": report.partial_sums})
            if three:
                out.fail(f"curvature operator is 3-nonnegative at soul parameter {param}")
        out.results["soul_points"] = soul_rows


def _witness_payload(w: ObstructionWitness) -> dict:
    return {
        "point": w.point,
        "alpha": w.alpha,
        "x": w.x, "y": w.y, "u": w.u, "v": w.v,
        "chart_vectors": w.chart_vectors,
        "xi1": w.xi1.by_pair(), "xi2": w.xi2.by_pair(), "xi3": w.xi3.by_pair(),
        "quadratic_forms": list(w.quadratic_forms),
        "sum_value": w.sum_value,
        "threshold": w.threshold,
        "v_defect": w.v_defect,
        "orthonormality_residual": w.orthonormality_residual,
        "pattern_residual": w.pattern_residual,
    }


def run_soul(entry: ZooEntry, config: RunConfig, out: SuiteResult) -> None:
    soul = entry.soul
    if soul is None:
        out.skipped = "no declared soul"
        return
    tol = config.effective_tolerances()
    step = _step(entry, config)
    rows, witnesses, flats = [], [], []
    for i, param in enumerate(entry.soul_params()):
        R, adapted = soul_curvature(soul, param, step)
        relations = pointwise_relations(R, adapted, config.ineq13_samples, config.seed + i, config.tolerances)
        for finding in relations.violations():
            out.fail(f"{finding} at soul parameter {param}")

        row = {
            "param": param,
            "point": relations.point,
            "tangent_K": float(R.R[0, 1, 1, 0]) if adapted.tangent_dim >= 2 else None,
            "mixed_plane_max_K": relations.mixed_plane_max_K,
            "flat_plane_residual": relations.flat_plane_residual,
            "eq11_residual": relations.eq11_residual,
            "ineq13_min_slack": relations.ineq13_min_slack,
            "trace": relations.trace,
        }
        if entry.expected.soul_tangent_K is not None and row["tangent_K"] is not None:
            gap = abs(row["tangent_K"] - entry.expected.soul_tangent_K)
            if gap > tol["soul_tangent_K"]:
                out.fail(f"soul tangent curvature {row['tangent_K']:.8g} != {entry.expected.soul_tangent_K}")

        form = expansion_form(R, adapted)
        if not isinstance(form, NotApplicable):
            row["expansion_form"] = {
                "Q": form.Q,
                "min_eigenvalue": form.min_eigenvalue,
                "residual": expansion_residual(R, adapted, seed=config.seed + i),
            }
            if form.min_eigenvalue < -tol["ineq13"] * max(1.0, R.max_abs):
                out.fail(f"expansion form is indefinite ({form.min_eigenvalue:.3g}) at {param}")

        found = obstruction_witness(R, adapted, config.witness_samples, config.seed + i, config.tolerances)
        if isinstance(found, NotApplicable):
            row["witness"] = {"not_applicable": found.reason}
        elif isinstance(found, FlatNormalBundle):
            row["witness"] = {"verdict": FLAT_NORMAL_BUNDLE, "max_alpha": found.max_alpha, "threshold": found.threshold}
            flats.append(found.max_alpha)
        else:
            op = curvature_operator(R)
            three = spectral_report(op).verdict(3).nonnegative
            row["witness"] = {"verdict": OBSTRUCTION_FOUND, **_witness_payload(found),
                              "spectral_three_nonnegative": three}
            witnesses.append(found)
            if found.pattern_residual > tol["witness_pattern"]:
                out.fail(f"witness quadratic forms {found.quadratic_forms} miss (-a/2, -a/2, a/2) at {param}")
            if three:
                out.fail(f"witness found but spectral report says 3-nonnegative at {param}")
        rows.append(row)

    split = entry.expected.expected_split
    if split is True:
        if witnesses:
            out.fail(f"{len(witnesses)} obstruction witnesses on an entry expected to split")
        if flats and max(flats) > tol["product_alpha"]:
            out.fail(f"max alpha {max(flats):.3g} above {tol['product_alpha']} on a split entry")
    elif split is False:
        if flats:
            out.fail(f"no witness at {len(flats)} soul points of an entry expected not to split")
        if witnesses and min(w.alpha for w in witnesses) <= tol["witness_min_alpha"]:
            out.fail(f"witness alpha {min(w.alpha for w in witnesses):.3g} too small")

    out.results = {
        "points": rows,
        "verdict": OBSTRUCTION_FOUND if witnesses else FLAT_NORMAL_BUNDLE if flats else "not applicable",
    }


def run_norms(entry: ZooEntry, config: RunConfig, out: SuiteResult) -> None:
    if entry.soul is None:
        out.skipped = "no declared soul"
        return
    tol = config.effective_tolerances()
    report = norm_inequality_report(entry, config.r, config.resolution, _step(entry, config), config.report_timing)
    out.results = {
        "r": report.r,
        "s_norm": report.s_norm,
        "rnabla_norm": report.rnabla_norm,
        "c_used": report.c_used,
        "slack": report.slack,
        "pointwise_min_slack_31": report.pointwise_min_slack_31,
        "pointwise_min_slack_32": report.pointwise_min_slack_32,
        "resolution": report.resolution,
        "nodes": report.nodes,
        "excluded_pole_margin": report.excluded_margin,
    }
    if config.report_timing:
        out.results["runtime"] = report.runtime
    if entry.expected.nonnegative:
        if report.slack < -tol["norm_slack"]:
            out.fail(f"||R^nabla||_r exceeds c^(1/2) ||s_M||_r by {-report.slack:.3g}")
        if report.pointwise_min_slack_31 < -tol["trace_slack"]:
            out.fail(f"pointwise traced inequality slack {report.pointwise_min_slack_31:.3g}")
        if report.pointwise_min_slack_32 < -tol["trace_slack"]:
            out.fail(f"pointwise scalar-curvature bound slack {report.pointwise_min_slack_32:.3g}")


def run_euler(entry: ZooEntry, config: RunConfig, out: SuiteResult) -> None:
    soul = entry.soul
    if soul is None or soul.param_dim != 2 or soul.codim != 2:
        out.skipped = "needs a surface soul with rank-2 normal bundle"
        return
    tol = config.effective_tolerances()
    report = euler_report(entry, config.resolution, _step(entry, config))
    out.results = {
        "euler_number": report.value,
        "reversed_orientation": report.reversed_value,
        "resolution": report.resolution,
        "nodes": report.nodes,
        "orientation_defect": report.orientation_defect,
    }
    if _relative(report.orientation_defect, report.value) > tol["euler_orientation"]:
        out.fail(
            f"Euler number {report.value:.8g} does not flip sign under orientation reversal "
            f"(reversed {report.reversed_value:.8g})"
        )
    expected = entry.expected.euler_abs
    if expected is not None:
        if expected == 0.0:
            if abs(report.value) > tol["euler_zero"]:
                out.fail(f"Euler number {report.value:.8g}, expected 0")
        elif abs(abs(report.value) - expected) > tol["euler_integer"]:
            out.fail(f"|Euler number| {abs(report.value):.8g}, expected {expected}")


SUITE_RUNNERS: dict[str, Callable[[ZooEntry, RunConfig, SuiteResult], None]] = {
    "identities": run_identities,
    "spectral": run_spectral,
    "soul": run_soul,
    "norms": run_norms,
    "euler": run_euler,
}


def run_suite(suite: str, entry: ZooEntry, config: RunConfig) -> SuiteResult:
    out = SuiteResult(suite=suite, entry=entry.name)
    started = time.perf_counter()
    SUITE_RUNNERS[suite](entry, config, out)
    if config.report_timing:
        out.runtime = time.perf_counter() - started
    level = logging.WARNING if out.findings else logging.INFO
    logger.log(level, f"{entry.name}/{suite}: {len(out.findings)} findings" + (f" ({out.skipped})" if out.skipped else ""))
    return out
