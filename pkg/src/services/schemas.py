"""Declarative experiment configs and the records the commands emit."""

import math
from typing import Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.tomography.models import CountModel
from src.utils.config import settings

RELCLOCK_VERSION = "1.0.0"
UNDEFINED = "undefined"

ExperimentMode = Literal["paw-observer", "paw-superobserver", "gppt"]
Cell = Optional[Union[int, float]]


class ExperimentConfig(BaseModel):
    """One sweep: which experiment, over which plate/delay values, with how much sampling."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    mode: ExperimentMode

    # ── Clock ──
    omega: float = Field(default_factory=lambda: settings.default_omega, gt=0)
    t1: float = 0.0

    # ── Sweep ──
    plate_A_values: List[float] = Field(default_factory=list)
    delta_B_values: List[float] = Field(default_factory=list)
    plate_distribution: Literal["list", "uniform"] = "list"
    chi: float = 0.0

    # ── Sampling ──
    shots: int = Field(default=0, ge=0)
    exposure: int = Field(default=0, ge=0)
    seed: int = Field(default=0, ge=0, lt=2**64)
    count_model: CountModel = "binomial"
    quadrature_nodes: int = Field(default_factory=lambda: settings.quadrature_nodes, ge=64)

    # ── Output ──
    output_path: Optional[str] = None
    format: Literal["csv", "json"] = "csv"

    @field_validator("plate_A_values", "delta_B_values")
    @classmethod
    def validate_finite(cls, v):
        if not all(math.isfinite(x) for x in v):
            raise ValueError("sweep values must be finite")
        return v

    @field_validator("omega", "t1", "chi")
    @classmethod
    def validate_scalar(cls, v):
        if not math.isfinite(v):
            raise ValueError("must be finite")
        return v

    @model_validator(mode="after")
    def check_mode_fields(self) -> "ExperimentConfig":
        if self.mode in ("paw-observer", "paw-superobserver") and not self.plate_A_values:
            raise ValueError("plate_A_values empty")
        if self.mode == "gppt" and not self.delta_B_values:
            raise ValueError("delta_B_values empty")
        return self

    @property
    def sampled_plates(self) -> Literal["list", "uniform"]:
        """Plate distribution used by Monte Carlo; an empty gppt plate list means uniform."""

        if not self.plate_A_values:
            return "uniform"
        return self.plate_distribution


class RunRecord(BaseModel):
    """Everything one command produced, in emission order."""

    model_config = ConfigDict(frozen=True)

    config: ExperimentConfig
    columns: List[str]
    points: List[Dict[str, Cell]]
    summary: Dict[str, Cell] = Field(default_factory=dict)
    versions: Dict[str, str] = Field(default_factory=dict)
    timestamp: Optional[str] = None

    @field_validator("points", mode="before")
    @classmethod
    def parse_points(cls, v):
        return [_parse_cells(row) for row in v]

    @field_validator("summary", mode="before")
    @classmethod
    def parse_summary(cls, v):
        return _parse_cells(v)

    @model_validator(mode="after")
    def check_cells(self) -> "RunRecord":
        for index, row in enumerate(self.points):
            if list(row) != self.columns:
                raise ValueError(f"point {index} columns {list(row)} differ from header")
        for row in [*self.points, self.summary]:
            for name, value in row.items():
                if value is not None and not math.isfinite(value):
                    raise ValueError(f"cell {name} is not finite: {value!r}")
        return self


def _parse_cells(row: Dict[str, object]) -> Dict[str, object]:
    return {key: None if value == UNDEFINED else value for key, value in row.items()}
