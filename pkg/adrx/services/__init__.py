from .geometry import (
    GeometryError,
    NoIntersectionError,
    DegenerateSegmentError,
    distance_to_center,
    line_sphere_intersection,
)
from .sampling import rng_for_trial, displacement_sample, desorption_displacement
from .quadrature import QuadratureFailure, panel_quadrature
from .laplace import ConvergenceFailure, talbot_invert
from .analytic import (
    analytic_service,
    phi_z,
    z_laplace,
    spatial_distribution,
    coupling_rate,
    cumulative_fraction,
    expected_net_adsorbed,
)
from .simulator import (
    StateCorruptionError,
    InvalidRegimeWarning,
    simulation_service,
    adsorption_probability,
    desorption_probability,
    place_desorbed,
    step,
    run_trial,
)
from .experiment_runner import experiment_runner, run_experiment

__all__ = [
    # Geometry
    "GeometryError", "NoIntersectionError", "DegenerateSegmentError",
    "distance_to_center", "line_sphere_intersection",
    # Sampling
    "rng_for_trial", "displacement_sample", "desorption_displacement",
    # Numerics
    "QuadratureFailure", "panel_quadrature", "ConvergenceFailure", "talbot_invert",
    # Analytic model
    "analytic_service", "phi_z", "z_laplace", "spatial_distribution", "coupling_rate",
    "cumulative_fraction", "expected_net_adsorbed",
    # Simulation
    "StateCorruptionError", "InvalidRegimeWarning", "simulation_service",
    "adsorption_probability", "desorption_probability", "place_desorbed", "step", "run_trial",
    # Experiments
    "experiment_runner", "run_experiment",
]
