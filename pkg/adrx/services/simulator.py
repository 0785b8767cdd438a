"""
Particle-based simulation of the reversible adsorption receiver

Each step, in order: free molecules diffuse; molecules that end inside the
sphere either adsorb at the crossing point (probability P_A) or bounce back
to where they started; molecules adsorbed at the start of the step release
with probability P_D and are pushed outward by the empirical displacement.
"""

import math
import warnings
from typing import Optional

import numpy as np
from loguru import logger

from ..models import ChannelParams, ReceiverGeometry, SampleSeries, SimConfig, TrialState, Vec3
from .geometry import intersect_segments
from .sampling import (
    desorption_displacements,
    emission_positions,
    random_signs,
    rng_for_trial,
    step_sigma,
)


class StateCorruptionError(Exception):
    """Custom exception for broken molecule bookkeeping"""
    pass


class InvalidRegimeWarning(UserWarning):
    """P_A formula exceeded 1; dt is too large for the adsorption rate"""
    pass


def adsorption_probability(k1: float, dt: float, D: float, warn: bool = True) -> float:
    """P_A = k1 sqrt(pi dt / D), clamped to 1.

    An infinite k1 is a perfectly absorbing surface and gives 1 silently.
    With ``warn`` a clamped value is logged and raised as InvalidRegimeWarning.
    """
    if math.isinf(k1):
        return 1.0
    p = k1 * math.sqrt(math.pi * dt / D)
    if p > 1.0:
        if not warn:
            return 1.0
        message = f"P_A = {p:.4g} > 1 for k1={k1}, dt={dt}, D={D}; clamped to 1"
        logger.warning(message)
        warnings.warn(message, InvalidRegimeWarning, stacklevel=2)
        return 1.0
    return p


def desorption_probability(km1: float, dt: float) -> float:
    """P_D = 1 - exp(-km1 dt)"""
    if math.isinf(km1):
        return 1.0
    return float(-math.expm1(-km1 * dt))


def _outward_signs(offsets: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    signs = np.sign(offsets)
    zero = signs == 0.0
    if np.any(zero):
        signs[zero] = random_signs(rng, int(zero.sum()))
    return signs


def place_desorbed_batch(
    adsorbed: np.ndarray, center: np.ndarray, disp: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """Per-coordinate outward displacement of released molecules.

    Coordinates equal to the center coordinate take a random sign.
    """
    return adsorbed + _outward_signs(adsorbed - center, rng) * disp


def place_desorbed(p_adsorbed: Vec3, center: Vec3, disp: Vec3, rng: np.random.Generator) -> Vec3:
    point = place_desorbed_batch(
        p_adsorbed.as_array()[None, :], center.as_array(), disp.as_array()[None, :], rng
    )[0]
    return Vec3.from_array(point)


class SimulationService:
    """Runs single trials; holds no state between calls"""

    def emit(
        self, params: ChannelParams, geom: ReceiverGeometry, cfg: SimConfig, rng: np.random.Generator
    ) -> TrialState:
        positions = emission_positions(rng, params.ntx, params.r0, geom.center.as_array(), cfg.emission)
        return TrialState.from_positions(positions)

    def step(
        self,
        state: TrialState,
        params: ChannelParams,
        geom: ReceiverGeometry,
        dt: float,
        rng: np.random.Generator,
        p_adsorb: Optional[float] = None,
        p_desorb: Optional[float] = None,
    ) -> TrialState:
        """Advance one dt in place and return the state.

        ``p_adsorb``/``p_desorb`` may be passed precomputed by callers that
        step many times with fixed parameters.
        """
        if p_adsorb is None:
            p_adsorb = adsorption_probability(params.k1, dt, params.D)
        if p_desorb is None:
            p_desorb = desorption_probability(params.km1, dt)

        center = geom.center.as_array()
        rr = geom.rr
        pos = state.positions
        adsorbed = state.adsorbed
        was_adsorbed = np.flatnonzero(adsorbed)

        # Propagate free molecules
        free = np.flatnonzero(~adsorbed)
        prev = pos[free]
        new = prev + rng.normal(0.0, step_sigma(params.D, dt), size=prev.shape)
        rel = new - center
        collided = np.flatnonzero(np.einsum("ij,ij->i", rel, rel) < rr * rr)

        n_adsorb = 0
        if collided.size:
            stick = rng.random(collided.size) < p_adsorb
            hit = collided[stick]
            bounce = collided[~stick]
            if hit.size:
                new[hit] = intersect_segments(prev[hit], new[hit], center, rr)
                adsorbed[free[hit]] = True
                n_adsorb = int(hit.size)
            new[bounce] = prev[bounce]
        pos[free] = new

        # Only molecules adsorbed at the start of the step may release
        n_desorb = 0
        if p_desorb > 0.0 and was_adsorbed.size:
            released = was_adsorbed[rng.random(was_adsorbed.size) < p_desorb]
            if released.size:
                disp = desorption_displacements(rng, released.size, params.D, dt)
                pos[released] = place_desorbed_batch(pos[released], center, disp, rng)
                adsorbed[released] = False
                n_desorb = int(released.size)

        state.step_index += 1
        state.n_collided = int(collided.size)
        state.n_adsorbed += n_adsorb - n_desorb
        state.n_free += n_desorb - n_adsorb
        state.window_adsorbed += n_adsorb
        state.window_desorbed += n_desorb

        if state.n_free + state.n_adsorbed != state.ntx or state.n_free < 0 or state.n_adsorbed < 0:
            raise StateCorruptionError(
                f"step {state.step_index}: n_free={state.n_free} + n_adsorbed={state.n_adsorbed} "
                f"!= ntx={state.ntx}"
            )
        if state.n_adsorbed != int(np.count_nonzero(adsorbed)):
            raise StateCorruptionError(
                f"step {state.step_index}: counter n_adsorbed={state.n_adsorbed} disagrees with "
                f"{int(np.count_nonzero(adsorbed))} adsorbed molecules"
            )
        return state

    def run_trial(
        self,
        params: ChannelParams,
        geom: ReceiverGeometry,
        cfg: SimConfig,
        trial_index: int,
        warn: bool = True,
    ) -> SampleSeries:
        """Emit ntx molecules at t = 0 and record N_A - N_D per sampling window.

        The experiment runner passes ``warn=False`` and checks the regime once per variant.
        """
        rng = rng_for_trial(cfg.seed, trial_index)
        state = self.emit(params, geom, cfg, rng)
        p_adsorb = adsorption_probability(params.k1, cfg.dt, params.D, warn=warn)
        p_desorb = desorption_probability(params.km1, cfg.dt)
        steps = cfg.steps_per_window

        values = []
        for window in range(cfg.n_windows):
            state.reset_window()
            adsorbed_before = state.n_adsorbed
            for _ in range(steps):
                self.step(state, params, geom, cfg.dt, rng, p_adsorb, p_desorb)
            net = state.window_net
            if net != state.n_adsorbed - adsorbed_before:
                raise StateCorruptionError(
                    f"window {window}: N_A - N_D = {net} but n_adsorbed moved by "
                    f"{state.n_adsorbed - adsorbed_before}"
                )
            values.append(float(net))

        logger.debug(
            f"Trial {trial_index}: {state.step_index} steps, {state.n_adsorbed} adsorbed at t_end"
        )
        return SampleSeries(name=f"trial_{trial_index}", ts=cfg.ts, t_grid=cfg.window_starts(), values=values)


# Global simulation service instance
simulation_service = SimulationService()


def step(
    state: TrialState, params: ChannelParams, geom: ReceiverGeometry, dt: float, rng: np.random.Generator
) -> TrialState:
    return simulation_service.step(state, params, geom, dt, rng)


def run_trial(
    params: ChannelParams, geom: ReceiverGeometry, cfg: SimConfig, trial_index: int, warn: bool = True
) -> SampleSeries:
    return simulation_service.run_trial(params, geom, cfg, trial_index, warn=warn)
