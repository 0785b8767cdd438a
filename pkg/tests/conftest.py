"""
Test configuration and fixtures
"""

from pathlib import Path

import pytest

from adrx.config import settings
from adrx.models import ChannelParams, QuadratureSpec, ReceiverGeometry, SimConfig

PRESETS = Path(__file__).resolve().parent.parent / "presets"


@pytest.fixture(autouse=True)
def single_worker(monkeypatch):
    """Run trials in-process unless a test asks for a pool."""
    monkeypatch.setattr(settings, "threads", 1)


@pytest.fixture
def presets_dir() -> Path:
    return PRESETS


@pytest.fixture
def adsorption_params() -> ChannelParams:
    """Adsorption-sweep geometry at k1 = 40 um/s."""
    return ChannelParams(D=8.0, r0=11.0, rr=10.0, k1=40.0, km1=5.0, ntx=1000)


@pytest.fixture
def desorption_params() -> ChannelParams:
    """Desorption-sweep geometry at k1 = 20 um/s."""
    return ChannelParams(D=8.0, r0=11.0, rr=10.0, k1=20.0, km1=5.0, ntx=1000)


@pytest.fixture
def absorbing_params() -> ChannelParams:
    """Nearly absorbing surface without desorption."""
    return ChannelParams(D=8.0, r0=11.0, rr=10.0, k1=1e4, km1=0.0, ntx=1000)


@pytest.fixture
def perfect_absorber() -> ChannelParams:
    return ChannelParams(D=8.0, r0=11.0, rr=10.0, k1=float("inf"), km1=0.0, ntx=1000)


@pytest.fixture
def quad() -> QuadratureSpec:
    return QuadratureSpec()


@pytest.fixture
def geom() -> ReceiverGeometry:
    return ReceiverGeometry(rr=10.0)


@pytest.fixture
def adsorption_sim() -> SimConfig:
    return SimConfig(dt=1e-5, ts=0.002, t_end=0.1, trials=10, seed=7)


@pytest.fixture
def quick_sim() -> SimConfig:
    """Coarse grid for fast end-to-end runs."""
    return SimConfig(dt=1e-4, ts=0.002, t_end=0.02, trials=4, seed=11)


@pytest.fixture
def write_config(tmp_path):
    """Write a key=value config file and return its path."""

    def _write(lines, name="experiment.env") -> Path:
        path = tmp_path / name
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    return _write
