from .geometry import Vec3, MoleculeState, Molecule, ReceiverGeometry, SURFACE_REL_TOL
from .channel import ChannelParams, SimConfig, QuadratureSpec, EmissionMode
from .series import SampleSeries, ComplexFreqSample, LaplaceSample
from .trial import TrialState
from .experiment import (
    RunMode,
    SweepAxis,
    Variant,
    ExperimentConfig,
    WindowComparison,
    ComparisonReport,
    RunFailure,
    RunMetadata,
    ExperimentOutcome,
    column_name,
    format_value,
)

__all__ = [
    # Geometry
    "Vec3", "MoleculeState", "Molecule", "ReceiverGeometry", "SURFACE_REL_TOL",
    # Parameters
    "ChannelParams", "SimConfig", "QuadratureSpec", "EmissionMode",
    # Series and samples
    "SampleSeries", "ComplexFreqSample", "LaplaceSample",
    # Simulation state
    "TrialState",
    # Experiments
    "RunMode", "SweepAxis", "Variant", "ExperimentConfig", "WindowComparison",
    "ComparisonReport", "RunFailure", "RunMetadata", "ExperimentOutcome", "column_name", "format_value",
]
