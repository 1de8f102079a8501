import os
from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Mapping, Optional

from dotenv import dotenv_values
from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, ValidationError, field_validator, model_validator

from liouville_fbm._core.errors import ConfigError

ENV_PREFIX = "LFBM_"


def _split_list(value: Any) -> Any:
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    return value


FloatList = Annotated[List[float], BeforeValidator(_split_list)]
IntList = Annotated[List[int], BeforeValidator(_split_list)]


class ExperimentConfig(BaseModel):
    """
    Flat parameter set shared by every subcommand.

    Each command reads the keys it needs. Unknown keys are rejected.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    beta: float = Field(default=0.5, gt=0, lt=1)
    betas: FloatList = Field(default_factory=lambda: [0.1, 0.3, 0.7, 0.9])
    alpha: float = 0.25
    alphas: FloatList = Field(default_factory=lambda: [0.0, 0.1, 0.3])
    theta: float = Field(default=0.0, ge=0)
    thetas: FloatList = Field(default_factory=lambda: [0.0, 0.1])
    lattice_betas: FloatList = Field(default_factory=list)
    d: int = 1
    K: int = Field(default=64, ge=1)
    K_list: IntList = Field(default_factory=lambda: [64, 128, 256, 512, 1024])
    T: float = Field(default=1.0, gt=0)
    n_cells: int = Field(default=64, ge=1)
    n_paths: int = Field(default=2000, ge=2)
    n_functions: int = Field(default=100, ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)
    scheme: Literal["cholesky", "moving_average"] = "cholesky"
    kind: Literal["liouville", "classical"] = "liouville"
    normalization: Literal["unhalved", "conventional"] = "unhalved"
    side: Literal["left", "right"] = "left"
    function: Literal["ones", "indicator", "power"] = "ones"
    y: float = Field(default=0.5, gt=0)
    m: int = Field(default=2, ge=1)
    e: int = Field(default=2, ge=1)
    operator_path: Optional[str] = None
    golden_path: Optional[str] = None
    record_golden: bool = False
    output_dir: str = "out"
    z_threshold: Optional[float] = Field(default=None, gt=0)
    tolerance: Optional[float] = Field(default=None, gt=0)
    plot: bool = True

    @field_validator("d")
    @classmethod
    def _supported_dimension(cls, value: int) -> int:
        if value not in (1, 2):
            raise ValueError("d must be 1 or 2")
        return value

    @field_validator("betas")
    @classmethod
    def _open_unit_interval(cls, values: List[float]) -> List[float]:
        if not values or any(not 0 < b < 1 for b in values):
            raise ValueError("betas must be a non-empty list inside (0, 1)")
        return values

    @field_validator("lattice_betas")
    @classmethod
    def _lattice_inside_unit_interval(cls, values: List[float]) -> List[float]:
        if any(not 0 < b < 1 for b in values):
            raise ValueError("lattice_betas must lie inside (0, 1)")
        return values

    @field_validator("thetas")
    @classmethod
    def _nonnegative_thetas(cls, values: List[float]) -> List[float]:
        if not values or any(t < 0 for t in values):
            raise ValueError("thetas must be a non-empty list of values >= 0")
        return values

    @model_validator(mode="after")
    def _indicator_inside_horizon(self) -> "ExperimentConfig":
        if self.y > self.T:
            raise ValueError("y must lie inside (0, T]")
        return self

    def echo(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")


def _field_lookup() -> Dict[str, str]:
    return {name.lower(): name for name in ExperimentConfig.model_fields}


def _canonical_keys(raw: Mapping[str, Any], source: str) -> Dict[str, Any]:
    lookup = _field_lookup()
    resolved = {}
    for key, value in raw.items():
        name = lookup.get(key.strip().lower())
        if name is None:
            raise ConfigError(f"Unknown key '{key}' in {source}")
        if value is None:
            raise ConfigError(f"Key '{key}' in {source} has no value")
        resolved[name] = value
    return resolved


def _environment_values(environ: Mapping[str, str]) -> Dict[str, Any]:
    lookup = _field_lookup()
    values = {}
    for key, value in environ.items():
        if not key.startswith(ENV_PREFIX):
            continue
        name = lookup.get(key[len(ENV_PREFIX):].lower())
        if name is not None:
            values[name] = value
    return values


def load_experiment_config(
    path: Optional[str] = None,
    overrides: Optional[Mapping[str, Any]] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> ExperimentConfig:
    """
    Resolve an ExperimentConfig from ``LFBM_*`` environment variables, an
    optional key=value file and explicit overrides, in increasing priority.
    """
    values: Dict[str, Any] = _environment_values(os.environ if environ is None else environ)

    if path is not None:
        file_path = Path(path)
        if not file_path.exists():
            raise ConfigError(f"Config file not found: {file_path}")
        values.update(_canonical_keys(dotenv_values(file_path), str(file_path)))

    if overrides:
        values.update(_canonical_keys({k: v for k, v in overrides.items() if v is not None}, "command line"))

    try:
        return ExperimentConfig(**values)
    except ValidationError as ex:
        raise ConfigError(f"Invalid experiment config: {ex}") from ex
