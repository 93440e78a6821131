import math
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.core.states import EXACT_TOL, Ket
from src.utils.config import settings


class ClockParams(BaseModel):
    """Two-valued clock: detector 1 reads t1, detector 2 reads t2 = t1 + π/(2ω)."""

    model_config = ConfigDict(frozen=True)

    omega: float = Field(default_factory=lambda: settings.default_omega, gt=0)
    t1: float = 0.0
    t2: Optional[float] = None

    @model_validator(mode="before")
    @classmethod
    def fill_t2(cls, data):
        if isinstance(data, dict) and data.get("t2") is None:
            omega = data.get("omega", settings.default_omega)
            if omega is not None and omega > 0:
                data = {**data, "t2": data.get("t1", 0.0) + math.pi / (2 * omega)}
        return data

    @model_validator(mode="after")
    def check_spacing(self) -> "ClockParams":
        if abs((self.t2 - self.t1) - math.pi / (2 * self.omega)) > EXACT_TOL:
            raise ValueError("t2 - t1 must equal pi / (2 omega)")
        return self

    def reading(self, k: int) -> float:
        """Clock time shown when detector k (1 or 2) fires."""

        if k == 1:
            return self.t1
        if k == 2:
            return self.t2
        raise ValueError(f"clock detector must be 1 or 2, got {k}")


class PawState(BaseModel):
    """Global clock⊗rest state together with its clock calibration."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    psi: Ket
    clock_params: ClockParams = Field(default_factory=ClockParams)

    @model_validator(mode="after")
    def check_psi(self) -> "PawState":
        if self.psi.dim != 4:
            raise ValueError("PaW state must be a ququart ket")
        if not self.psi.normalized:
            raise ValueError("PaW state must be normalized")
        return self

    @property
    def omega(self) -> float:
        return self.clock_params.omega


class ConditionalTable(BaseModel):
    """P(system detector j | clock detector k); None marks an undefined row."""

    model_config = ConfigDict(frozen=True)

    p31: Optional[float] = None
    p32: Optional[float] = None
    p41: Optional[float] = None
    p42: Optional[float] = None
    # ── Clock-outcome probabilities (row denominators) ──
    clock_1: float
    clock_2: float

    @model_validator(mode="after")
    def check_rows(self) -> "ConditionalTable":
        for upper, lower in ((self.p31, self.p41), (self.p32, self.p42)):
            if (upper is None) != (lower is None):
                raise ValueError("a conditional row is either fully defined or undefined")
            if upper is not None and abs(upper + lower - 1.0) > EXACT_TOL:
                raise ValueError("defined conditional rows must sum to one")
        return self

    def get(self, j: int, k: int) -> Optional[float]:
        return getattr(self, f"p{j}{k}")

    def as_row(self) -> dict:
        return {"P3g1": self.p31, "P3g2": self.p32, "P4g1": self.p41, "P4g2": self.p42}
