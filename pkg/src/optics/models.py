import math
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.utils.config import settings

SamplingMode = Literal["paw-observer", "gppt"]


class ShotConfig(BaseModel):
    """One Monte Carlo run of the coincidence layer."""

    model_config = ConfigDict(frozen=True)

    n_shots: int = Field(ge=1)
    seed: int = Field(ge=0, lt=2**64)
    mode: SamplingMode
    plate_A_list: List[float] = Field(default_factory=list)
    delta_B: float = 0.0
    omega: float = Field(default_factory=lambda: settings.default_omega, gt=0)
    plate_distribution: Literal["list", "uniform"] = "list"

    @field_validator("plate_A_list")
    @classmethod
    def validate_plates(cls, v):
        if not all(math.isfinite(x) for x in v):
            raise ValueError("plate thicknesses must be finite")
        return v

    @model_validator(mode="after")
    def check_plates(self) -> "ShotConfig":
        if self.plate_distribution == "list" and not self.plate_A_list:
            raise ValueError("plate_A_list must be non-empty")
        return self


class CoincidenceTable(BaseModel):
    """Accumulated coincidence counts N_jk plus post-selection discards."""

    model_config = ConfigDict(frozen=True)

    n31: int = Field(default=0, ge=0)
    n32: int = Field(default=0, ge=0)
    n41: int = Field(default=0, ge=0)
    n42: int = Field(default=0, ge=0)
    discarded: int = Field(default=0, ge=0)
    n_shots: int = Field(ge=1)
    seed: int

    @model_validator(mode="after")
    def check_total(self) -> "CoincidenceTable":
        if self.n31 + self.n32 + self.n41 + self.n42 + self.discarded != self.n_shots:
            raise ValueError("counts and discards must add up to n_shots")
        return self

    def count(self, j: int, k: int) -> int:
        return getattr(self, f"n{j}{k}")


class EstimatedConditional(BaseModel):
    """Binomial estimate of P(j|k); p_hat and stderr are None for an empty column."""

    model_config = ConfigDict(frozen=True)

    numerator: int = Field(ge=0)
    denominator: int = Field(ge=0)
    p_hat: Optional[float] = None
    stderr: Optional[float] = None

    @classmethod
    def from_counts(cls, numerator: int, denominator: int) -> "EstimatedConditional":
        if denominator == 0:
            return cls(numerator=numerator, denominator=0)
        p_hat = numerator / denominator
        return cls(
            numerator=numerator,
            denominator=denominator,
            p_hat=p_hat,
            stderr=math.sqrt(p_hat * (1.0 - p_hat) / denominator),
        )

    @property
    def defined(self) -> bool:
        return self.p_hat is not None


class ConditionalEstimates(BaseModel):
    """The four estimated conditionals of one coincidence table."""

    model_config = ConfigDict(frozen=True)

    p3g1: EstimatedConditional
    p3g2: EstimatedConditional
    p4g1: EstimatedConditional
    p4g2: EstimatedConditional

    def get(self, j: int, k: int) -> EstimatedConditional:
        return getattr(self, f"p{j}g{k}")
