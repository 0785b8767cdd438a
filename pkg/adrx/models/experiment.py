"""
Experiment configuration and comparison report models
"""

import itertools
import math
from enum import Enum
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .channel import ChannelParams, QuadratureSpec, SimConfig
from .series import SampleSeries


class RunMode(str, Enum):
    SIMULATE = "simulate"
    ANALYTIC = "analytic"
    COMPARE = "compare"


def format_value(value: float) -> str:
    """Compact parameter rendering used in variant labels ("20", "0.5", "inf")."""
    if math.isinf(value):
        return "inf"
    return f"{value:g}"


class SweepAxis(BaseModel):
    """One swept channel parameter"""

    model_config = ConfigDict(ser_json_inf_nan="strings")

    parameter: Literal["k1", "km1"]
    values: List[float] = Field(..., min_length=1)

    @field_validator("values")
    @classmethod
    def reject_nan(cls, v: List[float]) -> List[float]:
        if any(math.isnan(x) for x in v):
            raise ValueError("sweep values must be numbers")
        return v


class Variant(BaseModel):
    """One point of the sweep grid"""

    label: str
    channel: ChannelParams
    overrides: Dict[str, float] = Field(default_factory=dict)


class ExperimentConfig(BaseModel):
    """Fully resolved experiment description"""

    model_config = ConfigDict(ser_json_inf_nan="strings")

    channel: ChannelParams
    sim: SimConfig
    quad: QuadratureSpec = Field(default_factory=QuadratureSpec)
    mode: RunMode = RunMode.COMPARE
    sweep: List[SweepAxis] = Field(default_factory=list)
    output_path: str = "results/adrx.csv"

    @model_validator(mode="after")
    def check_sweep(self) -> "ExperimentConfig":
        names = [axis.parameter for axis in self.sweep]
        if len(names) != len(set(names)):
            raise ValueError(f"sweep axes must be distinct, got {names}")
        # Building every variant re-runs the ChannelParams validators
        self.variants()
        return self

    def variants(self) -> List[Variant]:
        """Cartesian product of the sweep axes in declaration order.

        Without a sweep there is a single variant with an empty label.
        """
        if not self.sweep:
            return [Variant(label="", channel=self.channel)]

        result = []
        axes = [[(axis.parameter, v) for v in axis.values] for axis in self.sweep]
        for combo in itertools.product(*axes):
            overrides = dict(combo)
            label = ";".join(f"{name}={format_value(v)}" for name, v in combo)
            result.append(
                Variant(label=label, channel=self.channel.with_updates(**overrides), overrides=overrides)
            )
        return result


class WindowComparison(BaseModel):
    """Analytic vs simulated value for one sampling window"""

    model_config = ConfigDict(ser_json_inf_nan="strings")

    t_start: float
    t_end: float
    analytic: float
    mean: float
    stderr: float = Field(..., ge=0.0)
    z: float


class ComparisonReport(BaseModel):
    """Per-window comparison and summary statistics for one variant"""

    model_config = ConfigDict(ser_json_inf_nan="strings")

    label: str = ""
    trials: int
    windows: List[WindowComparison]
    max_abs_z: float
    fraction_within_threshold: float
    rms_relative_error: Optional[float] = None  # None when no window clears the floor
    windows_above_floor: int = 0
    z_threshold: float
    passed: bool

    def summary_line(self) -> str:
        rms = "n/a" if self.rms_relative_error is None else f"{self.rms_relative_error:.4f}"
        name = self.label or "base"
        return (
            f"[{name}] max|z|={self.max_abs_z:.3f} "
            f"within={self.fraction_within_threshold:.3f} rms_rel={rms} "
            f"{'PASS' if self.passed else 'FAIL'}"
        )


class RunFailure(BaseModel):
    type: str
    message: str


class RunMetadata(BaseModel):
    """Contents of the JSON sidecar written next to each CSV"""

    model_config = ConfigDict(ser_json_inf_nan="strings")

    config: ExperimentConfig
    seed: int
    version: str
    runtime_seconds: float
    reports: List[ComparisonReport] = Field(default_factory=list)
    failure: Optional[RunFailure] = None


class ExperimentOutcome(BaseModel):
    """Everything a run produced"""

    config: ExperimentConfig
    series: List[SampleSeries]
    reports: List[ComparisonReport] = Field(default_factory=list)
    csv_path: Optional[str] = None
    meta_path: Optional[str] = None
    runtime_seconds: float = 0.0

    def report_for(self, label: str) -> Optional[ComparisonReport]:
        return next((r for r in self.reports if r.label == label), None)

    def series_named(self, name: str) -> Optional[SampleSeries]:
        return next((s for s in self.series if s.name == name), None)

    def variant_labels(self) -> List[str]:
        return [v.label for v in self.config.variants()]


def column_name(kind: str, label: str) -> str:
    """CSV column name for a series of a given kind ("mean", "stderr", "analytic", "z")."""
    return f"{kind}[{label}]" if label else kind
