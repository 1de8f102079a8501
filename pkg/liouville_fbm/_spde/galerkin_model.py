import math
from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class GalerkinModel(BaseModel):
    """
    Spectral truncation of ``dU = AU dt + B dW`` on ``(0, 1)**d`` with the
    Dirichlet Laplacian as ``A``. Mode ``k`` has eigenvalue
    ``pi**2 |k|**2``; the ``K`` retained modes are those with the smallest
    eigenvalues, ties broken by multi-index.

    ``noise_coeffs`` are the diagonal entries ``b_k`` of ``B`` (identity when
    omitted) and ``initial`` the modal coefficients of ``U(0)`` (zero when
    omitted).
    """

    model_config = ConfigDict(frozen=True)

    d: Literal[1, 2] = 1
    K: int = Field(ge=1)
    theta: float = Field(default=0.0, ge=0)
    noise_coeffs: Optional[List[float]] = None
    initial: Optional[List[float]] = None

    @model_validator(mode="after")
    def _lengths(self) -> "GalerkinModel":
        for name in ("noise_coeffs", "initial"):
            values = getattr(self, name)
            if values is not None and len(values) != self.K:
                raise ValueError(f"{name} needs {self.K} entries, got {len(values)}")
        return self

    def multi_indices(self) -> np.ndarray:
        """``(K, d)`` array of the retained multi-indices, sorted by eigenvalue."""
        if self.d == 1:
            return np.arange(1, self.K + 1).reshape(-1, 1)
        # a quarter disc of radius r holds about pi r**2 / 4 lattice points
        side = int(math.ceil(math.sqrt(4.0 * self.K / math.pi))) + 2
        k1, k2 = np.meshgrid(np.arange(1, side + 1), np.arange(1, side + 1), indexing="ij")
        k1, k2 = k1.ravel(), k2.ravel()
        order = np.lexsort((k2, k1, k1**2 + k2**2))
        return np.stack([k1[order], k2[order]], axis=1)[: self.K]

    def eigenvalues(self) -> np.ndarray:
        """``lambda_k = pi**2 |k|**2`` (positive; the generator is ``-lambda_k`` on mode ``k``)."""
        k = self.multi_indices()
        return math.pi**2 * np.sum(k**2, axis=1).astype(float)

    def noise(self) -> np.ndarray:
        return np.ones(self.K) if self.noise_coeffs is None else np.asarray(self.noise_coeffs, dtype=float)

    def initial_modes(self) -> np.ndarray:
        return np.zeros(self.K) if self.initial is None else np.asarray(self.initial, dtype=float)

    @property
    def identity_noise(self) -> bool:
        return self.noise_coeffs is None

    def norm_weights(self, theta: Optional[float] = None) -> np.ndarray:
        """``lambda_k**(2 theta)``: the discrete ``E_theta`` norm weights."""
        theta = self.theta if theta is None else theta
        return self.eigenvalues() ** (2.0 * theta)

    def propagator(self, delta: float) -> np.ndarray:
        """One-step modal semigroup ``exp(-lambda_k delta)``, each in ``(0, 1)``."""
        return np.exp(-self.eigenvalues() * delta)


def series_converges(d: int, beta: float, theta: float) -> bool:
    """``sum_k lambda_k**(2 theta) Var X_k(t)`` is finite iff ``2 beta - 2 theta > d / 2``."""
    return 2.0 * beta - 2.0 * theta > d / 2.0
