import math
from enum import Enum
from typing import Union

from pydantic import BaseModel, ConfigDict, Field
from scipy.special import gamma

BROWNIAN_TOLERANCE = 1e-12


class Regime(str, Enum):
    BELOW_HALF = "below_half"
    BROWNIAN = "brownian"
    ABOVE_HALF = "above_half"


class HurstOrder(BaseModel):
    """Order ``0 < beta < 1`` of a Liouville fractional Brownian motion."""

    model_config = ConfigDict(frozen=True)

    beta: float = Field(gt=0, lt=1)

    @classmethod
    def of(cls, value: Union["HurstOrder", float]) -> "HurstOrder":
        return value if isinstance(value, HurstOrder) else cls(beta=float(value))

    @property
    def is_brownian(self) -> bool:
        return abs(self.beta - 0.5) <= BROWNIAN_TOLERANCE

    @property
    def regime(self) -> Regime:
        if self.is_brownian:
            return Regime.BROWNIAN
        return Regime.BELOW_HALF if self.beta < 0.5 else Regime.ABOVE_HALF

    @property
    def exponent(self) -> float:
        """Kernel exponent ``beta - 1/2``."""
        return self.beta - 0.5

    @property
    def kernel_gamma(self) -> float:
        return float(gamma(self.beta + 0.5))

    def variance_constant(self) -> float:
        """``Var W(t) = variance_constant() * t**(2 beta)``."""
        return 1.0 / (2.0 * self.beta * self.kernel_gamma**2)

    def indicator_constant(self) -> float:
        """``1 / (sqrt(2 beta) Gamma(beta + 1/2))``: norm of ``1_{(0,t)}`` is this times ``t**beta``."""
        return 1.0 / (math.sqrt(2.0 * self.beta) * self.kernel_gamma)

    def __float__(self) -> float:
        return self.beta


BetaLike = Union[HurstOrder, float]
