"""Request/response models shared by the HTTP service and the CLI.

A RunConfig round-trips losslessly through JSON, so every emitted artifact
can embed the exact configuration that produced it.
"""

import math
from typing import List, Literal, Optional

from pydantic import BaseModel, Field, model_validator

Command = Literal["sweep", "threshold", "conditional", "noisy", "verify"]


class StateSpec(BaseModel):
    """Input state: fock1, sqfock1 (squeeze t), or attenuated (survival eta)."""

    kind: Literal["fock1", "sqfock1", "attenuated"] = "fock1"
    t: Optional[float] = None
    eta: Optional[float] = None

    @model_validator(mode="after")
    def _check(self):
        if self.kind == "sqfock1" and self.t is None:
            raise ValueError("sqfock1 needs the squeeze parameter t")
        if self.kind == "attenuated":
            if self.eta is None:
                raise ValueError("attenuated needs eta")
            if not 0 <= self.eta <= 1:
                raise ValueError("eta must lie in [0, 1]")
        return self

    @property
    def eta_value(self) -> float:
        return self.eta if self.kind == "attenuated" else 1.0


class GainSpec(BaseModel):
    mode: Literal["unity", "optimal", "ralph", "fixed"] = "unity"
    value: Optional[float] = None

    @model_validator(mode="after")
    def _check(self):
        if self.mode == "fixed" and (self.value is None or self.value < 0):
            raise ValueError("fixed gain needs a value G >= 0")
        return self


class RegionSpec(BaseModel):
    kind: Literal["none", "disk", "point", "square"] = "none"
    size: Optional[float] = None    # K for disk, a_half for square

    @model_validator(mode="after")
    def _check(self):
        if self.kind in ("disk", "square") and (self.size is None or self.size <= 0):
            raise ValueError(f"{self.kind} region needs a positive size")
        return self


class RangeSpec(BaseModel):
    """Inclusive grid start..stop in steps of step (a single value is start=stop)."""

    start: float
    stop: float
    step: float = 1.0

    @model_validator(mode="after")
    def _check(self):
        if self.step <= 0:
            raise ValueError("step must be positive")
        return self

    def values(self) -> List[float]:
        if self.stop < self.start - 1e-12:
            return []
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return [self.start + k * self.step for k in range(count)]


class RunConfig(BaseModel):
    command: Command = "sweep"
    state: StateSpec = StateSpec()
    vsq_db: Optional[RangeSpec] = None      # squeezed variance grid, dB
    vsq_r: Optional[RangeSpec] = None       # same grid in natural r units
    noise_db: Optional[RangeSpec] = None    # noise excess 10 log10(2N)
    gain: GainSpec = GainSpec()
    region: RegionSpec = RegionSpec()
    eta: Optional[RangeSpec] = None         # detector/threshold eta grid
    fmt: Literal["csv", "json"] = "csv"
    seed: int = Field(default=20240817, ge=0, lt=2 ** 64)
    mc_samples: int = Field(default=200_000, ge=10_000)
    tol: Optional[float] = Field(default=None, gt=0)
    perturb: bool = False                   # verify self-test hook


class TableResponse(BaseModel):
    config: RunConfig
    columns: List[str]
    rows: List[List[float]]


class VerifySuite(BaseModel):
    name: str
    max_dev: float
    tol: float
    passed: bool


class VerifyResponse(BaseModel):
    config: RunConfig
    suites: List[VerifySuite]
    passed: bool
