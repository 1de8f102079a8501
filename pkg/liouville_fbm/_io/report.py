import math
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from liouville_fbm._integral.estimate import McEstimate
from liouville_fbm._utilities.seed_service import SeedService


class CheckResult(BaseModel):
    """
    One row of a run report. Statistical checks pass iff ``|z_score|`` is at
    most the z threshold; deterministic checks pass iff ``error`` is at most
    ``tolerance``.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    name: str
    kind: Literal["statistical", "deterministic"]
    oracle: Optional[float] = None
    estimate: Optional[float] = None
    std_error: Optional[float] = None
    z_score: Optional[float] = None
    error: Optional[float] = None
    tolerance: Optional[float] = None
    passed: bool = Field(alias="pass")
    detail: Dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def statistical(cls, name: str, oracle: float, estimate: float, std_error: float, z_threshold: float, **detail) -> "CheckResult":
        if std_error > 0:
            z = (estimate - oracle) / std_error
        else:
            z = 0.0 if estimate == oracle else math.copysign(math.inf, estimate - oracle)
        return cls(name=name, kind="statistical", oracle=oracle, estimate=estimate, std_error=std_error,
                   z_score=z, passed=abs(z) <= z_threshold, detail=detail)

    @classmethod
    def from_variance(cls, name: str, oracle: float, mc: McEstimate, z_threshold: float, **detail) -> "CheckResult":
        return cls.statistical(name, oracle, mc.variance, mc.variance_std_error, z_threshold, n_paths=mc.n_paths, **detail)

    @classmethod
    def from_mean(cls, name: str, oracle: float, mc: McEstimate, z_threshold: float, **detail) -> "CheckResult":
        return cls.statistical(name, oracle, mc.mean, mc.std_error, z_threshold, n_paths=mc.n_paths, **detail)

    @classmethod
    def deterministic(cls, name: str, error: float, tolerance: float, oracle: Optional[float] = None,
                      estimate: Optional[float] = None, **detail) -> "CheckResult":
        return cls(name=name, kind="deterministic", oracle=oracle, estimate=estimate, error=error,
                   tolerance=tolerance, passed=bool(error <= tolerance), detail=detail)

    @classmethod
    def condition(cls, name: str, holds: bool, **detail) -> "CheckResult":
        """A yes/no property; recorded as a deterministic check with error 0 or 1."""
        return cls.deterministic(name, 0.0 if holds else 1.0, 0.0, **detail)


class RunReport(BaseModel):
    """Everything a command produces besides its data files."""

    command: str
    version: str
    config: Dict[str, Any]
    settings: Dict[str, Any]
    checks: List[CheckResult] = Field(default_factory=list)
    results: Dict[str, Any] = Field(default_factory=dict)
    artifacts: Dict[str, str] = Field(default_factory=dict)

    @property
    def all_passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def add(self, check: CheckResult) -> CheckResult:
        self.checks.append(check)
        return check

    def record_artifact(self, path: Union[str, Path]) -> None:
        """File name -> SHA-256 of its bytes."""
        path = Path(path)
        self.artifacts[path.name] = SeedService.hash_bytes(path.read_bytes())

    def summary_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {
                    "check": c.name,
                    "oracle": c.oracle,
                    "estimate": c.estimate,
                    "z": c.z_score,
                    "error": c.error,
                    "pass": c.passed,
                }
                for c in self.checks
            ],
            columns=["check", "oracle", "estimate", "z", "error", "pass"],
        )

    def to_document(self) -> Dict[str, Any]:
        document = self.model_dump(mode="python", by_alias=True)
        document["all_passed"] = self.all_passed
        return document
