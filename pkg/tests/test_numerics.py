"""
Test the panel quadrature and the Talbot inversion
"""

import math

import numpy as np
import pytest

from adrx.services import quadrature as quad_module
from adrx.services.laplace import ConvergenceFailure, talbot_invert
from adrx.services.quadrature import PanelQuadrature, QuadratureFailure, frequency_cutoff


class TestGaussKronrodRule:
    """Test the 15-point rule constants."""

    def test_weights_integrate_constants(self):
        """Both weight sets sum to the length of [-1, 1]."""
        assert quad_module._KRONROD.sum() == pytest.approx(2.0, abs=1e-14)
        assert quad_module._GAUSS.sum() == pytest.approx(2.0, abs=1e-14)

    def test_gauss_rule_exact_for_degree_13(self):
        """The embedded 7-point Gauss rule integrates x^12 exactly."""
        x = quad_module._NODES
        assert float(quad_module._GAUSS @ x ** 12) == pytest.approx(2.0 / 13.0, rel=1e-13)


class TestPanelQuadrature:
    """Test adaptive integration of frequency kernels."""

    def test_damped_cosine(self):
        """int_0^inf exp(-w) cos(3w) dw = 1/10."""
        result = PanelQuadrature().integrate(
            lambda w: np.exp(-w) * np.exp(3j * w), 60.0, math.pi / 12.0, 1e-10, 10_000
        )
        assert result.value == pytest.approx(0.1, rel=1e-9)

    def test_inverse_sqrt_singularity(self):
        """int_0^inf exp(-w)/sqrt(w) dw = sqrt(pi)."""
        result = PanelQuadrature().integrate(
            lambda w: np.exp(-w) / np.sqrt(w) + 0j, 60.0, 1.0, 1e-10, 10_000
        )
        assert result.value == pytest.approx(math.sqrt(math.pi), rel=1e-9)

    def test_zero_integrand(self):
        """An identically zero kernel integrates to exactly 0."""
        result = PanelQuadrature().integrate(lambda w: np.zeros_like(w, dtype=complex), 10.0, 1.0, 1e-8, 100)
        assert result.value == 0.0

    def test_panel_budget_exceeded(self):
        """Too many required panels raises QuadratureFailure."""
        with pytest.raises(QuadratureFailure):
            PanelQuadrature().integrate(lambda w: np.exp(1j * w), 1000.0, 0.1, 1e-8, 100)

    def test_frequency_cutoff_meets_envelope(self):
        """The envelope and its tail bound fall to rel_tol * 1e-2 at the cut-off."""
        for power in (0.0, 0.5, 1.0):
            w = frequency_cutoff(0.1, power, 1e-8)
            envelope = math.exp(-0.1 * math.sqrt(w / 2.0)) * w ** (-power)
            assert envelope < 1e-10
            tail_bound = envelope * (1.0 + 2.0 * math.sqrt(2.0 * w) / 0.1)
            assert tail_bound == pytest.approx(1e-10, rel=1e-6)

    def test_frequency_cutoff_shrinks_with_distance(self):
        """Farther sources need fewer frequencies."""
        assert frequency_cutoff(1.0, 0.0, 1e-8) < frequency_cutoff(0.1, 0.0, 1e-8)


class TestTalbotInversion:
    """Test the fixed-Talbot inverse Laplace transform."""

    @pytest.mark.parametrize("t", [0.1, 1.0, 10.0])
    def test_unit_step(self, t):
        """1/s inverts to 1."""
        assert talbot_invert(lambda s: 1.0 / s, t) == pytest.approx(1.0, rel=1e-8)

    def test_exponential_decay(self):
        """1/(s+5) at t=0.1 inverts to exp(-0.5) = 0.606531."""
        assert talbot_invert(lambda s: 1.0 / (s + 5.0), 0.1) == pytest.approx(0.606531, abs=1e-6)

    def test_unsettled_inversion(self):
        """A function that is not a Laplace transform does not settle."""
        with pytest.raises(ConvergenceFailure):
            talbot_invert(lambda s: np.exp(s), 1.0)

    def test_rejects_nonpositive_time(self):
        """t must be positive."""
        with pytest.raises(ValueError):
            talbot_invert(lambda s: 1.0 / s, 0.0)
