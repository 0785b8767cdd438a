"""
Analytical channel response of the reversible adsorption receiver

All transforms are evaluated in dimensionless variables: lengths in units
of rr, times in units of tau0 = rr^2 / D, so S = s tau0 and W = w tau0.
Time-domain quantities come from the one-sided inversion
f(t) = (1/pi) Re int_0^inf F(jW) exp(jW t) dW of their Laplace transforms.
"""

import math
from typing import Callable, List, Optional, Sequence

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict
from scipy.special import erfc

from ..models import (
    ChannelParams,
    ComplexFreqSample,
    LaplaceSample,
    QuadratureSpec,
    SampleSeries,
    SimConfig,
)
from .laplace import ConvergenceFailure, talbot_invert
from .quadrature import PanelQuadrature, frequency_cutoff, panel_quadrature

# Envelope powers of the kernels at large frequency
_POWER_CONCENTRATION = 0.5
_POWER_RATE = 0.0
_POWER_CUMULATIVE = 1.0

# Below this W * width the window kernel switches to its Taylor series
_SERIES_THRESHOLD = 1e-8

# Relative gap between summed windows and the Talbot count that is logged as a warning
_CROSS_CHECK_REL_TOL = 1e-4


class ScaledChannel(BaseModel):
    """Dimensionless view of ChannelParams"""

    model_config = ConfigDict(frozen=True)

    length: float  # rr, um
    time: float  # rr^2 / D, s
    rho0: float  # r0 / rr
    delta0: float  # d / rr
    alpha: float  # k1 rr / D (inf for an absorbing surface)
    beta: float  # km1 tau0
    absorbing: bool

    @classmethod
    def from_params(cls, params: ChannelParams) -> "ScaledChannel":
        tau0 = params.rr ** 2 / params.D
        return cls(
            length=params.rr,
            time=tau0,
            rho0=params.r0 / params.rr,
            delta0=params.d / params.rr,
            alpha=params.k1 * params.rr / params.D,
            beta=params.km1 * tau0,
            absorbing=params.is_absorbing,
        )

    def kappa(self, S: np.ndarray) -> np.ndarray:
        """Adsorption part of the Robin coefficient, alpha S / (S + beta)."""
        if self.beta == 0.0:
            return np.full_like(S, self.alpha, dtype=complex)
        return self.alpha * S / (S + self.beta)

    def robin_weight(self, S: np.ndarray, q: np.ndarray) -> np.ndarray:
        """2H / (H + q) with H = 1 + kappa; tends to 2 on an absorbing surface."""
        if self.absorbing:
            return np.full_like(S, 2.0, dtype=complex)
        h = 1.0 + self.kappa(S)
        return 2.0 * h / (h + q)

    def coupling_weight(self, S: np.ndarray, q: np.ndarray) -> np.ndarray:
        """kappa / (q + H); tends to 1 on an absorbing surface."""
        if self.absorbing:
            return np.ones_like(S, dtype=complex)
        kappa = self.kappa(S)
        return kappa / (q + 1.0 + kappa)

    def zeta(self, S: np.ndarray, rho: float) -> np.ndarray:
        """Boundary correction of r C(r, s) without its physical prefactor."""
        q = np.sqrt(S)
        return self.robin_weight(S, q) * np.exp(-(rho + self.rho0 - 2.0) * q) / q

    def free_terms(self, S: np.ndarray, rho: float) -> np.ndarray:
        """Source plus image terms of r C(r, s) without the physical prefactor."""
        q = np.sqrt(S)
        return (np.exp(-abs(rho - self.rho0) * q) + np.exp(-(rho + self.rho0 - 2.0) * q)) / q

    def k_hat(self, S: np.ndarray) -> np.ndarray:
        """Laplace transform of the coupling rate (dimensionless)."""
        q = np.sqrt(S)
        return self.coupling_weight(S, q) * np.exp(-self.delta0 * q) / self.rho0


def _window_kernel(W: np.ndarray, start: float, width: float) -> np.ndarray:
    """exp(jW start) (exp(jW width) - 1) / (jW), cancellation-free near W = 0."""
    x = W * width
    s = np.sin(0.5 * x)
    expm1 = -2.0 * s * s + 1j * np.sin(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        exact = expm1 / (1j * W)
    series = width + 0.5j * W * width ** 2 - W ** 2 * width ** 3 / 6.0
    return np.exp(1j * W * start) * np.where(x < _SERIES_THRESHOLD, series, exact)


class AnalyticService:
    """Evaluates the spatial distribution, coupling rate and window counts"""

    def __init__(self, quadrature: PanelQuadrature = panel_quadrature):
        self.quadrature = quadrature

    def _inverse(
        self,
        kernel: Callable[[np.ndarray], np.ndarray],
        theta_max: float,
        decay: float,
        power: float,
        scaled: ScaledChannel,
        q: QuadratureSpec,
        what: str,
    ) -> float:
        """(1/pi) Re int_0^inf kernel(W) dW truncated at the envelope cut-off."""
        upper = frequency_cutoff(decay, power, q.rel_tol)
        cap = q.w_max * scaled.time
        if upper > cap:
            logger.warning(
                f"{what}: frequency cut-off {upper / scaled.time:.4g} rad/s capped at w_max={q.w_max:.4g}"
            )
            upper = cap
        width = math.pi / (4.0 * theta_max)
        result = self.quadrature.integrate(kernel, upper, width, q.rel_tol, q.max_panels)
        logger.debug(
            f"{what}: theta={theta_max:.4g} W_max={upper:.4g} panels={result.panels} "
            f"err={result.error:.2e}"
        )
        return result.value / math.pi

    # ------------------------------------------------------------------
    # Frequency and Laplace domain
    # ------------------------------------------------------------------

    @staticmethod
    def _check_radius(r: float, params: ChannelParams) -> None:
        if r < params.rr:
            raise ValueError(f"r={r} lies inside the receiver (rr={params.rr})")

    @staticmethod
    def _prefactor(params: ChannelParams) -> float:
        return params.rr / (8.0 * math.pi * params.r0 * params.D)

    def z_laplace(self, s: complex, r: float, params: ChannelParams, full: bool = False) -> complex:
        """Z(s), the boundary correction of r C(r, s | r0).

        With ``full`` the whole r C(r, s | r0) (source + image - Z) is returned.
        ``s`` must lie off the branch cut (-inf, 0].
        """
        self._check_radius(r, params)
        s = complex(s)
        if s.imag == 0.0 and s.real <= 0.0:
            raise ValueError(f"s={s} lies on the branch cut of sqrt(s/D)")
        scaled = ScaledChannel.from_params(params)
        S = np.array([s * scaled.time])
        rho = r / params.rr
        value = scaled.zeta(S, rho)
        if full:
            value = scaled.free_terms(S, rho) - value
        return complex(self._prefactor(params) * value[0])

    def phi_z(self, w: float, r: float, params: ChannelParams) -> complex:
        """phi_Z(w) = Z(jw), principal branch of sqrt(jw/D)."""
        if not w > 0.0:
            raise ValueError(f"phi_z needs w > 0, got {w}")
        return self.z_laplace(1j * w, r, params)

    def coupling_rate_laplace(self, s: complex, params: ChannelParams) -> complex:
        """Laplace transform of K(t | r0)."""
        s = complex(s)
        if s.imag == 0.0 and s.real <= 0.0:
            raise ValueError(f"s={s} lies on the branch cut of sqrt(s/D)")
        scaled = ScaledChannel.from_params(params)
        return complex(scaled.k_hat(np.array([s * scaled.time]))[0])

    def sample_phi_z(self, w_grid: Sequence[float], r: float, params: ChannelParams) -> List[ComplexFreqSample]:
        return [ComplexFreqSample(w=w, value=self.phi_z(w, r, params)) for w in w_grid]

    def sample_z_laplace(self, s_grid: Sequence[complex], r: float, params: ChannelParams) -> List[LaplaceSample]:
        return [LaplaceSample(s=s, value=self.z_laplace(s, r, params)) for s in s_grid]

    # ------------------------------------------------------------------
    # Time domain
    # ------------------------------------------------------------------

    def spatial_distribution(self, r: float, t: float, params: ChannelParams, q: QuadratureSpec) -> float:
        """C(r, t | r0) in um^-3 for one emitted molecule."""
        self._check_radius(r, params)
        if not t > 0.0:
            raise ValueError(f"t must be positive, got {t}")
        scaled = ScaledChannel.from_params(params)
        rho = r / params.rr
        theta = t / scaled.time

        norm = 8.0 * math.pi * params.r0 * math.sqrt(math.pi * params.D * t)
        four_dt = 4.0 * params.D * t
        source = math.exp(-(r - params.r0) ** 2 / four_dt) / norm
        image = math.exp(-(r + params.r0 - 2.0 * params.rr) ** 2 / four_dt) / norm

        def kernel(W: np.ndarray) -> np.ndarray:
            return scaled.zeta(1j * W, rho) * np.exp(1j * W * theta)

        integral = self._inverse(
            kernel, theta, rho + scaled.rho0 - 2.0, _POWER_CONCENTRATION, scaled, q, "spatial_distribution"
        )
        correction = integral / (8.0 * math.pi * params.rr * params.r0)
        return (source + image - correction) / r

    def coupling_rate(self, t: float, params: ChannelParams, q: QuadratureSpec) -> float:
        """K(t | r0), net rate of the surface reaction in 1/s."""
        if not t > 0.0:
            raise ValueError(f"t must be positive, got {t}")
        if params.k1 == 0.0:
            return 0.0
        scaled = ScaledChannel.from_params(params)
        theta = t / scaled.time

        def kernel(W: np.ndarray) -> np.ndarray:
            return scaled.k_hat(1j * W) * np.exp(1j * W * theta)

        value = self._inverse(kernel, theta, scaled.delta0, _POWER_RATE, scaled, q, "coupling_rate")
        return value / scaled.time

    def cumulative_fraction(self, T: float, params: ChannelParams, q: QuadratureSpec) -> float:
        """Fraction of emitted molecules adsorbed at time T."""
        if T < 0.0:
            raise ValueError(f"T must be nonnegative, got {T}")
        if T == 0.0 or params.k1 == 0.0:
            return 0.0
        scaled = ScaledChannel.from_params(params)
        theta = T / scaled.time

        def kernel(W: np.ndarray) -> np.ndarray:
            return scaled.k_hat(1j * W) * _window_kernel(W, 0.0, theta)

        return self._inverse(kernel, theta, scaled.delta0, _POWER_CUMULATIVE, scaled, q, "cumulative_fraction")

    def expected_net_adsorbed(self, T: float, params: ChannelParams, sim: SimConfig, q: QuadratureSpec) -> float:
        """Expected net newly-adsorbed molecules during [T, T + ts]."""
        if T < 0.0:
            raise ValueError(f"T must be nonnegative, got {T}")
        if params.k1 == 0.0:
            return 0.0
        scaled = ScaledChannel.from_params(params)
        start = T / scaled.time
        width = sim.ts / scaled.time

        def kernel(W: np.ndarray) -> np.ndarray:
            return scaled.k_hat(1j * W) * _window_kernel(W, start, width)

        fraction = self._inverse(
            kernel, start + width, scaled.delta0, _POWER_CUMULATIVE, scaled, q, "expected_net_adsorbed"
        )
        return params.ntx * fraction

    def adsorbed_concentration(self, t: float, params: ChannelParams, q: QuadratureSpec) -> float:
        """Surface density of adsorbed molecules per emitted molecule, um^-2."""
        return self.cumulative_fraction(t, params, q) / (4.0 * math.pi * params.rr ** 2)

    def expected_series(
        self, params: ChannelParams, sim: SimConfig, q: QuadratureSpec, name: str = "analytic"
    ) -> SampleSeries:
        """expected_net_adsorbed on every window of the sampling grid."""
        starts = sim.window_starts()
        values = [self.expected_net_adsorbed(t0, params, sim, q) for t0 in starts]
        logger.debug(f"Analytic series '{name}': {len(values)} windows")
        return SampleSeries(name=name, ts=sim.ts, t_grid=starts, values=values)

    # ------------------------------------------------------------------
    # Talbot path
    # ------------------------------------------------------------------

    def invert_laplace(self, F: Callable[[complex], complex], t: float, q: QuadratureSpec) -> float:
        """Fixed-Talbot inversion with ``q.talbot_terms`` contour nodes."""
        return talbot_invert(F, t, terms=q.talbot_terms)

    def talbot_spatial_distribution(self, r: float, t: float, params: ChannelParams, q: QuadratureSpec) -> float:
        """C(r, t | r0) by inverting the full Laplace-domain r C(r, s | r0)."""
        self._check_radius(r, params)
        return self.invert_laplace(lambda s: self.z_laplace(s, r, params, full=True) / r, t, q)

    def talbot_coupling_rate(self, t: float, params: ChannelParams, q: QuadratureSpec) -> float:
        if params.k1 == 0.0:
            return 0.0
        return self.invert_laplace(lambda s: self.coupling_rate_laplace(s, params), t, q)

    def talbot_cumulative_fraction(self, T: float, params: ChannelParams, q: QuadratureSpec) -> float:
        """R(T) as the inverse of K(s) / s."""
        if T < 0.0:
            raise ValueError(f"T must be nonnegative, got {T}")
        if T == 0.0 or params.k1 == 0.0:
            return 0.0
        return self.invert_laplace(lambda s: self.coupling_rate_laplace(s, params) / s, T, q)

    def cross_check(
        self, series: SampleSeries, params: ChannelParams, sim: SimConfig, q: QuadratureSpec
    ) -> Optional[float]:
        """Relative gap between the summed windows and ntx R(t_end) from Talbot.

        None when nothing adsorbs or the inversion does not settle.
        """
        if params.k1 == 0.0:
            return None
        try:
            expected = params.ntx * self.talbot_cumulative_fraction(sim.t_end, params, q)
        except ConvergenceFailure as e:
            logger.warning(f"Talbot cross-check skipped for '{series.name}': {e}")
            return None
        total = float(np.sum(series.values))
        gap = abs(total - expected) / max(abs(expected), 1e-12 * params.ntx)
        if gap > _CROSS_CHECK_REL_TOL:
            logger.warning(
                f"'{series.name}': windows sum to {total:.6g}, Talbot gives {expected:.6g} (gap {gap:.2e})"
            )
        else:
            logger.debug(f"'{series.name}': Talbot cross-check gap {gap:.2e}")
        return gap

    # ------------------------------------------------------------------
    # Perfectly absorbing receiver without desorption
    # ------------------------------------------------------------------

    @staticmethod
    def absorbing_cumulative_fraction(T: float, params: ChannelParams) -> float:
        """(rr / r0) erfc(d / sqrt(4 D T))"""
        if T <= 0.0:
            return 0.0
        return float(params.rr / params.r0 * erfc(params.d / math.sqrt(4.0 * params.D * T)))

    @staticmethod
    def absorbing_coupling_rate(t: float, params: ChannelParams) -> float:
        """Time derivative of absorbing_cumulative_fraction."""
        if t <= 0.0:
            return 0.0
        d = params.d
        return float(
            params.rr / params.r0 * d / math.sqrt(4.0 * math.pi * params.D * t ** 3)
            * math.exp(-d * d / (4.0 * params.D * t))
        )


# Global analytic service instance
analytic_service = AnalyticService()


def phi_z(w: float, r: float, params: ChannelParams) -> complex:
    return analytic_service.phi_z(w, r, params)


def z_laplace(s: complex, r: float, params: ChannelParams, full: bool = False) -> complex:
    return analytic_service.z_laplace(s, r, params, full=full)


def spatial_distribution(r: float, t: float, params: ChannelParams, q: QuadratureSpec) -> float:
    return analytic_service.spatial_distribution(r, t, params, q)


def coupling_rate(t: float, params: ChannelParams, q: QuadratureSpec) -> float:
    return analytic_service.coupling_rate(t, params, q)


def cumulative_fraction(T: float, params: ChannelParams, q: QuadratureSpec) -> float:
    return analytic_service.cumulative_fraction(T, params, q)


def expected_net_adsorbed(T: float, params: ChannelParams, sim: SimConfig, q: QuadratureSpec) -> float:
    return analytic_service.expected_net_adsorbed(T, params, sim, q)
