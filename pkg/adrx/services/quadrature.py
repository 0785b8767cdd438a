"""
Vectorised adaptive Gauss-Kronrod quadrature over frequency panels

Oscillatory transforms are integrated on [0, upper] split into panels no
wider than a quarter oscillation. Every panel is evaluated with a 7-point
Gauss / 15-point Kronrod pair and the worst panels are bisected until the
summed error estimate meets the tolerance. Panels touching zero use the
substitution w = u^2, which absorbs the 1/sqrt(w) behaviour of the kernels.
"""

import math
from typing import Callable

import numpy as np
from loguru import logger
from pydantic import BaseModel
from scipy.optimize import brentq

# Kronrod abscissae on [0, 1] (mirrored), QUADPACK qk15 values
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
# Gauss weights for _XGK[1], _XGK[3], _XGK[5], _XGK[7]
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# Full 15-point rule on [-1, 1]
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KRONROD = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS = np.zeros(15)
for _i, _w in zip((1, 3, 5), _WG[:3]):
    _GAUSS[_i] = _w
    _GAUSS[14 - _i] = _w
_GAUSS[7] = _WG[3]

_EPS = np.finfo(float).eps


class QuadratureFailure(Exception):
    """Custom exception for frequency integrals that miss their tolerance"""
    pass


class QuadratureResult(BaseModel):
    value: float
    error: float
    panels: int
    upper: float


def frequency_cutoff(decay: float, power: float, rel_tol: float) -> float:
    """Frequency beyond which the kernel tail is below rel_tol * 1e-2.

    The envelope exp(-decay sqrt(w/2)) w^-power is bounded together with its
    tail integral, roughly envelope * 2 sqrt(2w) / decay. ``decay`` is the
    dimensionless distance in the exponent of the kernel.
    """
    if decay <= 0.0:
        raise ValueError(f"decay must be positive, got {decay}")
    log_target = math.log(rel_tol * 1e-2)

    def log_envelope(w: float) -> float:
        tail = math.log1p(2.0 * math.sqrt(2.0 * w) / decay)
        return -decay * math.sqrt(w / 2.0) - power * math.log(w) + tail - log_target

    lo = 1e-12
    if log_envelope(lo) <= 0.0:
        return lo
    hi = 1.0
    while log_envelope(hi) > 0.0:
        hi *= 4.0
    return float(brentq(log_envelope, lo, hi, xtol=1e-12, rtol=1e-10))


class PanelQuadrature:
    """Adaptive panel integrator for Re of a complex frequency kernel"""

    def __init__(self, min_panels: int = 32):
        self.min_panels = min_panels

    @staticmethod
    def _evaluate(func: Callable[[np.ndarray], np.ndarray], a: np.ndarray, b: np.ndarray):
        """Kronrod value, error estimate and |f| integral per panel."""
        sub = a == 0.0
        # Panels starting at zero are integrated in u = sqrt(w)
        lo = np.where(sub, 0.0, a)
        hi = np.where(sub, np.sqrt(b), b)
        centre = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        x = centre[:, None] + half[:, None] * _NODES[None, :]
        w = np.where(sub[:, None], x * x, x)
        jac = np.where(sub[:, None], 2.0 * x, 1.0)

        fv = np.real(func(w.ravel())).reshape(w.shape) * jac

        resk = half * (fv @ _KRONROD)
        resg = half * (fv @ _GAUSS)
        resabs = half * (np.abs(fv) @ _KRONROD)
        mean = resk / np.where(half > 0.0, 2.0 * half, 1.0)
        resasc = half * (np.abs(fv - mean[:, None]) @ _KRONROD)

        err = np.abs(resk - resg)
        scale = np.ones_like(err)
        mask = (resasc != 0.0) & (err != 0.0)
        scale[mask] = np.minimum(1.0, (200.0 * err[mask] / resasc[mask]) ** 1.5)
        err = np.where(mask, resasc * scale, err)
        err = np.maximum(err, 50.0 * _EPS * resabs)
        return resk, err, resabs

    def integrate(
        self,
        func: Callable[[np.ndarray], np.ndarray],
        upper: float,
        max_width: float,
        rel_tol: float,
        max_panels: int,
    ) -> QuadratureResult:
        """Integrate Re(func) over [0, upper].

        ``func`` maps a real frequency array to complex kernel values.
        Raises QuadratureFailure once more than ``max_panels`` panels are needed.
        """
        width = min(max_width, upper / self.min_panels)
        n0 = int(math.ceil(upper / width))
        if n0 > max_panels:
            raise QuadratureFailure(
                f"{n0} initial panels needed for [0, {upper:.4g}] at width {width:.4g}, "
                f"max_panels={max_panels}"
            )
        edges = np.minimum(np.arange(n0 + 1, dtype=float) * width, upper)
        a, b = edges[:-1], edges[1:]
        val, err, resabs = self._evaluate(func, a, b)

        while True:
            total = float(np.sum(val))
            l1 = float(np.sum(resabs))
            tol = rel_tol * max(abs(total), 1e-4 * l1)
            total_err = float(np.sum(err))
            if total_err <= tol:
                break

            # Panels already at the roundoff floor cannot improve
            open_ = err > 100.0 * _EPS * resabs
            if not np.any(open_):
                logger.debug(f"Quadrature roundoff-limited: err={total_err:.3e} tol={tol:.3e}")
                break

            idx = np.flatnonzero(open_)
            order = idx[np.argsort(err[idx])[::-1]]
            excess = total_err - 0.5 * tol
            count = int(np.searchsorted(np.cumsum(err[order]), excess) + 1)
            split = order[: min(count, len(order))]

            if len(a) + len(split) > max_panels:
                raise QuadratureFailure(
                    f"tolerance {rel_tol:g} not met within {max_panels} panels "
                    f"(estimated error {total_err:.3e}, target {tol:.3e})"
                )

            mid = 0.5 * (a[split] + b[split])
            new_a = np.concatenate([a[split], mid])
            new_b = np.concatenate([mid, b[split]])
            nv, ne, nr = self._evaluate(func, new_a, new_b)

            keep = np.ones(len(a), dtype=bool)
            keep[split] = False
            a = np.concatenate([a[keep], new_a])
            b = np.concatenate([b[keep], new_b])
            val = np.concatenate([val[keep], nv])
            err = np.concatenate([err[keep], ne])
            resabs = np.concatenate([resabs[keep], nr])

        return QuadratureResult(
            value=float(np.sum(val)), error=float(np.sum(err)), panels=len(a), upper=upper
        )


# Global quadrature instance
panel_quadrature = PanelQuadrature()
