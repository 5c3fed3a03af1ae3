"""
Bivectors over the lexicographic basis {e_i ^ e_j : i < j}.

With an orthonormal frame underneath, the basis is orthonormal for the
induced inner product <x^y, z^w> = <x,z><y,w> - <x,w><y,z>.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from src.errors import DimensionMismatchError


@dataclass(frozen=True)
class BivectorBasis:
    n: int
    pairs: tuple[tuple[int, int], ...]

    @property
    def size(self) -> int:
        return len(self.pairs)

    def index(self, i: int, j: int) -> int:
        return self.pairs.index((i, j))

    def label(self, offset: int) -> str:
        i, j = self.pairs[offset]
        return f"e{i}^e{j}"


@lru_cache(maxsize=None)
def bivector_basis(n: int) -> BivectorBasis:
    return BivectorBasis(n=n, pairs=tuple((i, j) for i in range(n) for j in range(i + 1, n)))


@dataclass(eq=False)
class Bivector:
    coeffs: np.ndarray
    basis: BivectorBasis

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=float)
        if self.coeffs.shape != (self.basis.size,):
            raise DimensionMismatchError(
                f"Bivector with {self.coeffs.shape} coefficients on a basis of size {self.basis.size}"
            )

    def __add__(self, other: "Bivector") -> "Bivector":
        _same_basis(self.basis, other.basis)
        return Bivector(self.coeffs + other.coeffs, self.basis)

    def __sub__(self, other: "Bivector") -> "Bivector":
        _same_basis(self.basis, other.basis)
        return Bivector(self.coeffs - other.coeffs, self.basis)

    def __mul__(self, scalar: float) -> "Bivector":
        return Bivector(self.coeffs * scalar, self.basis)

    __rmul__ = __mul__

    def inner(self, other: "Bivector") -> float:
        _same_basis(self.basis, other.basis)
        return float(self.coeffs @ other.coeffs)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def by_pair(self) -> dict[str, float]:
        """Coefficients keyed by explicit index pairs."""
        return {f"{i}-{j}": float(c) for (i, j), c in zip(self.basis.pairs, self.coeffs)}


def _same_basis(a: BivectorBasis, b: BivectorBasis) -> None:
    if a.n != b.n:
        raise DimensionMismatchError(f"Bivectors over dimensions {a.n} and {b.n}")


def wedge(x: np.ndarray, y: np.ndarray) -> Bivector:
    """x ^ y for frame-component vectors x, y."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise DimensionMismatchError(f"Cannot wedge vectors of shapes {x.shape} and {y.shape}")
    basis = bivector_basis(x.shape[0])
    coeffs = np.array([x[i] * y[j] - x[j] * y[i] for i, j in basis.pairs])
    return Bivector(coeffs, basis)
