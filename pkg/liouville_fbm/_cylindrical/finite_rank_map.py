from dataclasses import dataclass

import numpy as np
from scipy.linalg import svdvals

from liouville_fbm._core.errors import DimensionMismatchError


@dataclass(frozen=True, eq=False)
class FiniteRankMap:
    """Linear map from the noise space R^m to the state space R^e, stored as an ``e x m`` array."""

    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        if entries.ndim != 2 or 0 in entries.shape:
            raise ValueError("a finite rank map needs a non-empty e x m array")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def rank_one(cls, h, x) -> "FiniteRankMap":
        """``h (x) x``: sends ``u`` to ``<u, h> x``."""
        return cls(np.outer(np.asarray(x, dtype=float), np.asarray(h, dtype=float)))

    @classmethod
    def random(cls, dim_state: int, dim_noise: int, rng: np.random.Generator) -> "FiniteRankMap":
        return cls(rng.standard_normal((dim_state, dim_noise)))

    @property
    def dim_state(self) -> int:
        return self.entries.shape[0]

    @property
    def dim_noise(self) -> int:
        return self.entries.shape[1]

    def hs_norm(self) -> float:
        """Hilbert-Schmidt norm; equals the gamma-norm for a Euclidean state space."""
        return float(np.sqrt(np.sum(self.entries**2)))

    def operator_norm(self) -> float:
        return float(svdvals(self.entries)[0])

    def __matmul__(self, other: "FiniteRankMap") -> "FiniteRankMap":
        if self.dim_noise != other.dim_state:
            raise DimensionMismatchError(
                f"cannot compose {self.dim_state}x{self.dim_noise} with {other.dim_state}x{other.dim_noise}"
            )
        return FiniteRankMap(self.entries @ other.entries)


def ideal_property_check(left: FiniteRankMap, middle: FiniteRankMap, right: FiniteRankMap) -> tuple:
    """``(||L S R||_HS, ||L|| ||S||_HS ||R||)``; the first never exceeds the second."""
    return (left @ middle @ right).hs_norm(), left.operator_norm() * middle.hs_norm() * right.operator_norm()
