"""
Exception hierarchy shared by every soulcurv package.

Argument-shaped failures also derive from ValueError so plain
`except ValueError` call sites keep working.
"""


class SoulcurvError(Exception):
    """Base class for all soulcurv failures."""


class DomainError(SoulcurvError, ValueError):
    """A point or parameter lies outside its box, or too close to its edge."""


class NonFiniteMetricError(SoulcurvError, ValueError):
    """Metric evaluation produced NaN or infinite entries."""


class SingularMetricError(SoulcurvError, ValueError):
    """Metric matrix is singular or not positive definite."""


class DependentVectorsError(SoulcurvError, ValueError):
    """Vectors handed to Gram-Schmidt are linearly dependent."""


class DegeneratePlaneError(SoulcurvError, ValueError):
    """Two vectors do not span a plane."""


class CurvatureSymmetryError(SoulcurvError):
    """Assembled curvature tensor violates its algebraic symmetries."""


class SignConventionError(SoulcurvError):
    """Curvature of a validation point has the wrong sign or value."""


class OperatorAsymmetryError(SoulcurvError):
    """Curvature operator matrix is not symmetric."""


class DimensionMismatchError(SoulcurvError, ValueError):
    """Arrays from different bases or dimensions were combined."""


class SpectralError(SoulcurvError):
    """Symmetric eigensolver failed to converge."""


class InvalidFrameSizeError(SoulcurvError, ValueError):
    """Requested k-frame size is outside 1..N."""


class FrameCompletionError(SoulcurvError):
    """Coordinate directions could not complete an adapted frame."""


class WitnessConsistencyError(SoulcurvError):
    """Obstruction construction produced a vector that is not normal."""


class QuotientError(SoulcurvError):
    """Quotient construction hit a vanishing Killing field or bad section."""


class ProfileError(SoulcurvError, ValueError):
    """Invalid cap profile parameters."""


class QuadratureError(SoulcurvError):
    """Quadrature node with a degenerate induced metric."""


class HypothesisViolationError(SoulcurvError, ValueError):
    """Integral-norm exponent does not satisfy r > dim(soul) / 2."""


class EulerDimensionError(SoulcurvError, ValueError):
    """Euler number requested for a soul that is not a surface with rank-2 normal bundle."""


class ConfigError(SoulcurvError, ValueError):
    """Run configuration names unknown entries, suites or fields."""


class ReportIOError(SoulcurvError, OSError):
    """Report could not be written to its output path."""
