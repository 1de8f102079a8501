import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class McEstimate(BaseModel):
    """
    Monte Carlo summary of one scalar statistic.

    ``std_error`` is the standard error of ``mean``;
    ``variance_std_error`` the large-sample standard error of ``variance``.
    """

    model_config = ConfigDict(frozen=True)

    mean: float
    variance: float
    std_error: float
    variance_std_error: float
    n_paths: int = Field(ge=2)

    @classmethod
    def from_samples(cls, samples) -> "McEstimate":
        x = np.asarray(samples, dtype=float).reshape(-1)
        n = x.size
        if n < 2:
            raise ValueError("a Monte Carlo estimate needs at least two samples")
        mean = float(np.mean(x))
        centred = x - mean
        m2 = float(np.mean(centred**2))
        m4 = float(np.mean(centred**4))
        variance = m2 * n / (n - 1)
        return cls(
            mean=mean,
            variance=variance,
            std_error=math.sqrt(variance / n),
            variance_std_error=math.sqrt(max(m4 - m2 * m2, 0.0) / n),
            n_paths=n,
        )

    def mean_z(self, oracle: float) -> float:
        return _z(self.mean - oracle, self.std_error)

    def variance_z(self, oracle: float) -> float:
        return _z(self.variance - oracle, self.variance_std_error)


def _z(difference: float, scale: float) -> float:
    if scale > 0:
        return difference / scale
    return 0.0 if difference == 0 else math.copysign(math.inf, difference)
