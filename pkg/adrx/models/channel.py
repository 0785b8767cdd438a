"""
Physical and numerical parameter models
"""

import math
from typing import Optional
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator

# Tolerance for "is an integer multiple of" checks on time steps
_GRID_REL_TOL = 1e-9


def _integer_ratio(numerator: float, denominator: float) -> Optional[int]:
    """Return numerator/denominator if it is a positive integer, else None."""
    ratio = numerator / denominator
    n = round(ratio)
    if n >= 1 and abs(ratio - n) <= _GRID_REL_TOL * max(1.0, n):
        return int(n)
    return None


class ChannelParams(BaseModel):
    """Physical constants of the channel.

    Lengths in micrometers, times in seconds. ``k1`` may be ``inf`` for a
    perfectly absorbing receiver.
    """

    model_config = ConfigDict(frozen=True, ser_json_inf_nan="strings")

    D: float = Field(..., gt=0.0, allow_inf_nan=False, description="Diffusion coefficient, um^2/s")
    r0: float = Field(..., gt=0.0, allow_inf_nan=False, description="Transmitter distance from receiver center, um")
    rr: float = Field(..., gt=0.0, allow_inf_nan=False, description="Receiver radius, um")
    k1: float = Field(..., ge=0.0, description="Adsorption rate, um/s")
    km1: float = Field(default=0.0, ge=0.0, allow_inf_nan=False, description="Desorption rate, 1/s")
    ntx: int = Field(default=1000, ge=1, description="Molecules per emission")

    @model_validator(mode="after")
    def check_distance(self) -> "ChannelParams":
        if math.isnan(self.k1):
            raise ValueError("k1 must be a number")
        if not self.r0 > self.rr:
            raise ValueError(
                f"d = r0 - rr must be positive (r0={self.r0}, rr={self.rr}, d={self.r0 - self.rr})"
            )
        return self

    @property
    def d(self) -> float:
        return self.r0 - self.rr

    @property
    def is_absorbing(self) -> bool:
        return math.isinf(self.k1)

    def with_updates(self, **changes) -> "ChannelParams":
        """Validated copy with some fields replaced (used by sweeps)."""
        return ChannelParams.model_validate({**self.model_dump(), **changes})


class EmissionMode(str, Enum):
    SHELL = "shell"  # uniform random point on the sphere of radius r0
    POINT = "point"  # fixed point at +x distance r0


class SimConfig(BaseModel):
    """Numerical knobs of the particle simulation"""

    model_config = ConfigDict(frozen=True, ser_json_inf_nan="strings")

    dt: float = Field(..., gt=0.0, allow_inf_nan=False, description="Simulation step, s")
    ts: float = Field(..., gt=0.0, allow_inf_nan=False, description="Sampling window, s")
    t_end: float = Field(..., gt=0.0, allow_inf_nan=False, description="End of the reporting grid, s")
    trials: int = Field(default=100, ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)
    emission: EmissionMode = EmissionMode.SHELL

    @model_validator(mode="after")
    def check_grid(self) -> "SimConfig":
        if self.dt > self.ts:
            raise ValueError(f"dt must not exceed ts (dt={self.dt}, ts={self.ts})")
        if _integer_ratio(self.ts, self.dt) is None:
            raise ValueError(f"ts must be an integer multiple of dt (ts={self.ts}, dt={self.dt})")
        if _integer_ratio(self.t_end, self.ts) is None:
            raise ValueError(f"t_end must be an integer multiple of ts (t_end={self.t_end}, ts={self.ts})")
        return self

    @property
    def steps_per_window(self) -> int:
        return _integer_ratio(self.ts, self.dt)

    @property
    def n_windows(self) -> int:
        return _integer_ratio(self.t_end, self.ts)

    def window_starts(self) -> list[float]:
        return [k * self.ts for k in range(self.n_windows)]


class QuadratureSpec(BaseModel):
    """Truncation and tolerance controls for frequency and Laplace integrals"""

    model_config = ConfigDict(frozen=True, ser_json_inf_nan="strings")

    w_max: float = Field(default=1e9, gt=0.0, description="Upper cap on the frequency cut-off, rad/s")
    rel_tol: float = Field(default=1e-8, gt=0.0, lt=1.0)
    max_panels: int = Field(default=200_000, ge=1)
    talbot_terms: int = Field(default=32, ge=8, le=64)
