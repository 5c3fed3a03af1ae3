"""
Process-level settings, read once from the environment.

DEFAULT_TOLERANCES is the single table of default tolerances. Run configs
may override any key; the effective table is echoed into every report.
"""

import os

LOG_LEVEL = os.environ.get("SOULCURV_LOG_LEVEL", "INFO")
DEFAULT_SEED = int(os.environ.get("SOULCURV_DEFAULT_SEED", "0"))
DEFAULT_RESOLUTION = int(os.environ.get("SOULCURV_RESOLUTION", "16"))
DEFAULT_R_EXPONENT = float(os.environ.get("SOULCURV_R_EXPONENT", "2.0"))
DEFAULT_WORKERS = int(os.environ.get("SOULCURV_WORKERS", "1"))
DEFAULT_REPORT_PATH = os.environ.get("SOULCURV_REPORT_PATH", "data/report.json")
RECORD_RUNS = os.environ.get("SOULCURV_RECORD_RUNS", "0").lower() in ("1", "true", "yes")

REPORT_SCHEMA_VERSION = "1.0"

# Relative step of finite differences: step = FD_RELATIVE_STEP * smallest box side.
FD_RELATIVE_STEP = 1e-3

# Samples drawn per seeded chunk; fixes the sample-to-seed mapping.
SAMPLE_CHUNK = 1024

# c in |R^nabla|^2 <= c * s_M^2 at a soul, from (4/9)AB <= (1/9)(A+B)^2.
NORM_CONSTANT_C = 1.0 / 9.0

DEFAULT_TOLERANCES = {
    # geometry-core
    "gram_check": 1e-10,              # max |E^T g E - Id| of a built frame
    "symmetry_abort": 1e-4,           # riemann() aborts above this relative residual
    "symmetry": 1e-6,                 # identity suite: residual / max(1, max|R|)
    "flat_max_abs": 1e-8,             # flat entries: max|R|
    "constant_curvature": 1e-5,       # |K - kappa| on constant-curvature entries
    "scalar_curvature": 1e-4,         # |s - n(n-1) kappa|
    "nonnegative_sectional": 1e-5,    # min sampled K >= -tol
    "sign_convention": 1e-5,          # unit sphere K = +1 check
    "plane_angle": 1e-6,              # radians; below this a plane is degenerate
    "gram_determinant": 1e-12,        # orthonormalize dependence threshold
    "far_field_flat": 1e-4,           # radial-plane curvature outside the cap
    "analytic_fd": 1e-4,              # analytic vs finite-difference jet, relative
    "frame_independence": 1e-8,       # scalar curvature in two frames, relative
    # bivector-spectral
    "operator_symmetry": 1e-8,        # relative asymmetry of rho
    "verdict_relative": 1e-8,         # verdict tol = this * max(1, spectral radius)
    "ky_fan": 1e-6,                   # frame search vs eigenvalue partial sums
    # soul-analysis
    "mixed_plane": 1e-5,
    "flat_plane": 1e-5,
    "eq11": 1e-4,
    "ineq13": 1e-8,                   # min slack >= -tol
    "trace_slack": 1e-8,
    "frame_projection": 1e-8,         # adapted frame tangent-span residual
    "witness_relative": 1e-5,         # alpha threshold = this * max(1, max|R|)
    "witness_normality": 1e-6,        # tangential part of R(x,y)u and <u,v>, relative to alpha
    "witness_pattern": 1e-4,          # quadratic forms vs (-a/2, -a/2, +a/2), relative
    "witness_orthonormal": 1e-8,
    "product_alpha": 1e-7,            # split entries: max alpha
    "witness_min_alpha": 1e-2,        # non-split entries: alpha of the witness
    "soul_tangent_K": 1e-3,           # tangent-plane curvature at the soul
    # integral-norms
    "norm_slack": 1e-6,
    "soul_area": 1e-3,                # quadrature volume vs closed form, relative
    "euler_integer": 1e-2,
    "euler_zero": 1e-6,
    "euler_orientation": 1e-12,      # |e + e_reversed|, relative to max(1, |e|)
}

DEFAULT_INEQ13_SAMPLES = 10_000
DEFAULT_WITNESS_SAMPLES = 256
DEFAULT_FRAME_SAMPLES = 64
DEFAULT_REFINE_STEPS = 40
DEFAULT_POINT_COUNT = 20
