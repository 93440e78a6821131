from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.core.states import DensityMatrix
from src.tomography.projections import ProjectionSetting

CountModel = Literal["binomial", "poisson"]


class TomographyData(BaseModel):
    """Coincidence counts of one tomography run, one count per projection setting."""

    model_config = ConfigDict(frozen=True)

    settings: List[ProjectionSetting]
    counts: List[int]
    exposure: int = Field(ge=1)
    count_model: CountModel = "binomial"

    @model_validator(mode="after")
    def check_counts(self) -> "TomographyData":
        if len(self.settings) != len(self.counts):
            raise ValueError(f"{len(self.settings)} settings but {len(self.counts)} counts")
        if any(n < 0 for n in self.counts):
            raise ValueError("counts must be nonnegative")
        # Poisson counts are unbounded; only fixed-exposure trials are capped.
        if self.count_model == "binomial" and any(n > self.exposure for n in self.counts):
            raise ValueError("binomial counts cannot exceed exposure")
        return self

    @property
    def frequencies(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=float) / self.exposure


class ReconstructionResult(BaseModel):
    """Reconstructed state plus the diagnostics of the method that produced it."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    rho: DensityMatrix
    method: Literal["linear", "mle"]
    physical: bool
    min_eigenvalue: float

    # ── mle only ──
    log_likelihood: Optional[float] = None
    iterations: Optional[int] = None
    gradient_norm: Optional[float] = None
    history: List[float] = Field(default_factory=list)
