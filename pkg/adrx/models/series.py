"""
Sampled time series and frequency/Laplace-domain sample records
"""

from typing import List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class SampleSeries(BaseModel):
    """Net newly-adsorbed count per sampling window.

    ``t_grid`` holds window start times; window k covers
    ``[t_grid[k], t_grid[k] + ts]``. Values may be negative (net desorption).
    """

    name: str = ""
    ts: float = Field(..., gt=0.0)
    t_grid: List[float]
    values: List[float]

    @model_validator(mode="after")
    def check_grid(self) -> "SampleSeries":
        if len(self.t_grid) != len(self.values):
            raise ValueError(
                f"t_grid and values differ in length ({len(self.t_grid)} vs {len(self.values)})"
            )
        if any(b <= a for a, b in zip(self.t_grid, self.t_grid[1:])):
            raise ValueError("t_grid must be strictly increasing")
        return self

    def __len__(self) -> int:
        return len(self.values)

    @property
    def t_end_grid(self) -> List[float]:
        return [t + self.ts for t in self.t_grid]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    def cumulative(self) -> np.ndarray:
        """Running net adsorbed count at each window end."""
        return np.cumsum(self.as_array())

    def shares_grid_with(self, other: "SampleSeries") -> bool:
        return self.ts == other.ts and self.t_grid == other.t_grid


class ComplexFreqSample(BaseModel):
    """phi_Z evaluated at angular frequency w (rad/s)"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    w: float = Field(..., ge=0.0)
    value: complex


class LaplaceSample(BaseModel):
    """A Laplace-domain value at complex frequency s (1/s)"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    s: complex
    value: complex
