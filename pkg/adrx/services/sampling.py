"""
Random sampling contract shared by the simulator and the harness

Every trial owns an independent numpy Generator derived from
(seed, trial index), so results do not depend on execution order.
"""

import numpy as np

from ..models import EmissionMode, Vec3

# Rational fit of the desorbed-molecule displacement per axis, in units of sqrt(2 D dt)
_F_NUM = (0.571825, -0.552246)
_F_DEN = (-1.53908, 0.546424)


def rng_for_trial(seed: int, trial_index: int) -> np.random.Generator:
    """Independent, reproducible stream for one trial."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial_index,)))


def step_sigma(D: float, dt: float) -> float:
    """Per-axis standard deviation of a free step, sqrt(2 D dt)."""
    return float(np.sqrt(2.0 * D * dt))


def displacement_samples(rng: np.random.Generator, n: int, D: float, dt: float) -> np.ndarray:
    """(n, 3) independent N(0, 2 D dt) displacements."""
    return rng.normal(0.0, step_sigma(D, dt), size=(n, 3))


def displacement_sample(rng: np.random.Generator, D: float, dt: float) -> Vec3:
    return Vec3.from_array(displacement_samples(rng, 1, D, dt)[0])


def desorption_offset(p, D: float, dt: float):
    """Empirical per-axis displacement f(P) of a desorbed molecule, P in [0, 1)."""
    p = np.asarray(p, dtype=float)
    num = _F_NUM[0] * p + _F_NUM[1] * p * p
    den = 1.0 + _F_DEN[0] * p + _F_DEN[1] * p * p
    return step_sigma(D, dt) * num / den


def desorption_displacements(rng: np.random.Generator, n: int, D: float, dt: float) -> np.ndarray:
    """(n, 3) nonnegative desorption displacements, one uniform draw per component."""
    return desorption_offset(rng.random(size=(n, 3)), D, dt)


def desorption_displacement(rng: np.random.Generator, D: float, dt: float) -> Vec3:
    return Vec3.from_array(desorption_displacements(rng, 1, D, dt)[0])


def random_signs(rng: np.random.Generator, shape) -> np.ndarray:
    """Uniform +/-1 draws."""
    return np.where(rng.random(size=shape) < 0.5, -1.0, 1.0)


def emission_positions(
    rng: np.random.Generator,
    n: int,
    r0: float,
    center: np.ndarray,
    mode: EmissionMode = EmissionMode.SHELL,
) -> np.ndarray:
    """Initial positions of n molecules at distance r0 from ``center``.

    SHELL draws independent uniform directions (normalised Gaussian vectors);
    POINT places all molecules at ``center + (r0, 0, 0)``.
    """
    center = np.asarray(center, dtype=float)
    if mode == EmissionMode.POINT:
        return np.tile(center + np.array([r0, 0.0, 0.0]), (n, 1))

    directions = rng.normal(size=(n, 3))
    norms = np.linalg.norm(directions, axis=1)
    # Zero vectors have probability zero but would divide by zero
    while np.any(norms == 0.0):
        idx = norms == 0.0
        directions[idx] = rng.normal(size=(int(idx.sum()), 3))
        norms = np.linalg.norm(directions, axis=1)
    return center + r0 * directions / norms[:, None]
