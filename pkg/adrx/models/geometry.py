"""
Geometric value types: points, the receiver sphere and single molecules
"""

from enum import Enum
from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

# Relative tolerance (of rr) for "on the surface" membership
SURFACE_REL_TOL = 1e-9


class Vec3(BaseModel):
    """Point or displacement in micrometers"""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    x: float
    y: float
    z: float

    @classmethod
    def origin(cls) -> "Vec3":
        return cls(x=0.0, y=0.0, z=0.0)

    @classmethod
    def from_array(cls, values: Sequence[float]) -> "Vec3":
        x, y, z = (float(v) for v in values)
        return cls(x=x, y=y, z=z)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))


class MoleculeState(str, Enum):
    FREE = "free"
    ADSORBED = "adsorbed"


class ReceiverGeometry(BaseModel):
    """Spherical receiver: center and radius rr (micrometers)"""

    model_config = ConfigDict(frozen=True)

    center: Vec3 = Field(default_factory=Vec3.origin)
    rr: float = Field(..., gt=0.0, allow_inf_nan=False)

    @property
    def surface_tolerance(self) -> float:
        return SURFACE_REL_TOL * self.rr


class Molecule(BaseModel):
    """One information molecule; confined to a single trial"""

    position: Vec3
    state: MoleculeState = MoleculeState.FREE

    def is_consistent_with(self, geometry: ReceiverGeometry) -> bool:
        """Adsorbed molecules sit on the surface, free ones outside it."""
        dist = float(np.linalg.norm(self.position.as_array() - geometry.center.as_array()))
        tol = geometry.surface_tolerance
        if self.state == MoleculeState.ADSORBED:
            return abs(dist - geometry.rr) <= tol
        return dist >= geometry.rr - tol
