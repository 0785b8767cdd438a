"""
Mutable per-trial simulation state
"""

from typing import List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .geometry import Molecule, MoleculeState, Vec3


class TrialState(BaseModel):
    """State of one trial: molecule positions/states plus event counters.

    Owned by a single trial and mutated in place by the simulator.
    ``window_adsorbed``/``window_desorbed`` accumulate N_A and N_D since the
    last window boundary.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, validate_assignment=False)

    positions: np.ndarray  # (ntx, 3), micrometers
    adsorbed: np.ndarray  # (ntx,), bool
    step_index: int = 0
    n_free: int = Field(..., ge=0)
    n_adsorbed: int = Field(default=0, ge=0)
    n_collided: int = 0  # N_C of the most recent step
    window_adsorbed: int = 0
    window_desorbed: int = 0

    @classmethod
    def from_positions(cls, positions: np.ndarray) -> "TrialState":
        positions = np.ascontiguousarray(positions, dtype=float)
        return cls(
            positions=positions,
            adsorbed=np.zeros(positions.shape[0], dtype=bool),
            n_free=positions.shape[0],
        )

    @property
    def ntx(self) -> int:
        return int(self.positions.shape[0])

    @property
    def window_net(self) -> int:
        return self.window_adsorbed - self.window_desorbed

    def reset_window(self) -> None:
        self.window_adsorbed = 0
        self.window_desorbed = 0

    @property
    def molecules(self) -> List[Molecule]:
        return [
            Molecule(
                position=Vec3.from_array(p),
                state=MoleculeState.ADSORBED if a else MoleculeState.FREE,
            )
            for p, a in zip(self.positions, self.adsorbed)
        ]
