import math
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.utils.config import settings

QUADRATURE_TOL = 1e-9


class DelaySetting(BaseModel):
    """Known clock delay τ, equivalently plate-B thickness δ_B = ωτ."""

    model_config = ConfigDict(frozen=True)

    tau: float
    omega: float = Field(default_factory=lambda: settings.default_omega, gt=0)

    @field_validator("tau")
    @classmethod
    def validate_tau(cls, v):
        if not math.isfinite(v):
            raise ValueError("tau must be finite")
        return v

    @classmethod
    def from_delta(cls, delta_B: float, omega: float) -> "DelaySetting":
        return cls(tau=delta_B / omega, omega=omega)

    @property
    def delta_B(self) -> float:
        return self.omega * self.tau

    def canonical(self) -> "DelaySetting":
        """Representative in [0, π/ω); every observable has period π/ω in τ."""

        return DelaySetting(tau=self.tau % (math.pi / self.omega), omega=self.omega)


class JointProbTable(BaseModel):
    """Joint detector probabilities P_jk after the initial-time post-selection."""

    model_config = ConfigDict(frozen=True)

    P31: float = Field(ge=0, le=1)
    P32: float = Field(ge=0, le=1)
    P41: float = Field(ge=0, le=1)
    P42: float = Field(ge=0, le=1)

    @model_validator(mode="after")
    def check_marginals(self) -> "JointProbTable":
        if abs(self.P31 + self.P32 + self.P41 + self.P42 - 1.0) > QUADRATURE_TOL:
            raise ValueError("joint probabilities must sum to one")
        if abs(self.P31 + self.P41 - 0.5) > QUADRATURE_TOL or abs(self.P32 + self.P42 - 0.5) > QUADRATURE_TOL:
            raise ValueError("clock marginals must be unbiased")
        return self

    def get(self, j: int, k: int) -> float:
        return getattr(self, f"P{j}{k}")

    def conditional(self, k: int) -> float:
        """p(3 | t_f = t_k) = P3k / (P3k + P4k)."""

        return self.get(3, k) / (self.get(3, k) + self.get(4, k))


class CurvePoint(BaseModel):
    """One point of the clock-time curve p(t)."""

    model_config = ConfigDict(frozen=True)

    t: float
    p: float
    branch: Literal[1, 2]
    tau: float
