"""
Experiment orchestration: trial farming, analytic curves and comparison
"""

import asyncio
import math
import time
from concurrent.futures import Executor, ProcessPoolExecutor
from typing import List, Optional, Tuple

import numpy as np
from loguru import logger

from ..config.settings import settings
from ..models import (
    ChannelParams,
    ComparisonReport,
    ExperimentConfig,
    ExperimentOutcome,
    ReceiverGeometry,
    RunMode,
    SampleSeries,
    SimConfig,
    WindowComparison,
    column_name,
)
from ..utils.file_handler import write_csv, write_metadata
from .analytic import AnalyticService, analytic_service
from .simulator import SimulationService, adsorption_probability, simulation_service


def _trial_values(params: ChannelParams, geom: ReceiverGeometry, sim: SimConfig, trial_index: int) -> List[float]:
    """Process-pool entry point; module level so it pickles."""
    return simulation_service.run_trial(params, geom, sim, trial_index, warn=False).values


def summarize_trials(values: np.ndarray, sim: SimConfig, label: str) -> Tuple[SampleSeries, SampleSeries]:
    """Mean and standard error per window of a (trials, windows) matrix."""
    trials = values.shape[0]
    mean = values.mean(axis=0)
    if trials >= 2:
        stderr = values.std(axis=0, ddof=1) / math.sqrt(trials)
    else:
        stderr = np.zeros_like(mean)
    grid = sim.window_starts()
    return (
        SampleSeries(name=column_name("mean", label), ts=sim.ts, t_grid=grid, values=mean.tolist()),
        SampleSeries(name=column_name("stderr", label), ts=sim.ts, t_grid=grid, values=stderr.tolist()),
    )


def compare_series(
    analytic: SampleSeries,
    mean: SampleSeries,
    stderr: SampleSeries,
    trials: int,
    label: str = "",
) -> ComparisonReport:
    """Per-window z-scores and the RMS relative error above the floor.

    The z denominator never drops below 1/trials, the resolution of a mean
    of integer counts.
    """
    if not (analytic.shares_grid_with(mean) and mean.shares_grid_with(stderr)):
        raise ValueError("analytic and simulated series must share one window grid")

    floor = 1.0 / trials
    a = analytic.as_array()
    m = mean.as_array()
    se = np.maximum(stderr.as_array(), floor)
    z = (m - a) / se

    windows = [
        WindowComparison(t_start=t0, t_end=t1, analytic=float(ai), mean=float(mi), stderr=float(si), z=float(zi))
        for t0, t1, ai, mi, si, zi in zip(analytic.t_grid, analytic.t_end_grid, a, m, se, z)
    ]

    above = a >= settings.relative_error_floor
    rms = float(np.sqrt(np.mean(((m[above] - a[above]) / a[above]) ** 2))) if np.any(above) else None
    within = float(np.mean(np.abs(z) <= settings.z_threshold)) if len(z) else 1.0

    passed = within >= settings.acceptance_fraction and (
        rms is None or rms <= settings.rms_relative_error_limit
    )
    return ComparisonReport(
        label=label,
        trials=trials,
        windows=windows,
        max_abs_z=float(np.max(np.abs(z))) if len(z) else 0.0,
        fraction_within_threshold=within,
        rms_relative_error=rms,
        windows_above_floor=int(np.count_nonzero(above)),
        z_threshold=settings.z_threshold,
        passed=passed,
    )


class ExperimentRunner:
    """Runs every variant of an experiment and writes its artifacts"""

    def __init__(
        self,
        simulation: SimulationService = simulation_service,
        analytic: AnalyticService = analytic_service,
    ):
        self.simulation = simulation
        self.analytic = analytic

    async def simulate(
        self,
        params: ChannelParams,
        geom: ReceiverGeometry,
        sim: SimConfig,
        executor: Optional[Executor] = None,
    ) -> np.ndarray:
        """(trials, windows) matrix of per-window net counts, rows in trial order."""
        if executor is None:
            rows = await asyncio.to_thread(
                lambda: [
                    self.simulation.run_trial(params, geom, sim, i, warn=False).values for i in range(sim.trials)
                ]
            )
        else:
            loop = asyncio.get_running_loop()
            futures = [
                loop.run_in_executor(executor, _trial_values, params, geom, sim, i)
                for i in range(sim.trials)
            ]
            # gather keeps submission order, so rows line up with trial indices
            rows = await asyncio.gather(*futures)
        return np.asarray(rows, dtype=float).reshape(sim.trials, sim.n_windows)

    async def analytic_curve(self, cfg: ExperimentConfig, params: ChannelParams, label: str) -> SampleSeries:
        """Expected window counts, checked against the Talbot path at t_end."""

        def compute() -> SampleSeries:
            series = self.analytic.expected_series(params, cfg.sim, cfg.quad, column_name("analytic", label))
            self.analytic.cross_check(series, params, cfg.sim, cfg.quad)
            return series

        return await asyncio.to_thread(compute)

    async def _run_variant(
        self,
        cfg: ExperimentConfig,
        params: ChannelParams,
        label: str,
        executor: Optional[Executor],
    ) -> Tuple[List[SampleSeries], Optional[ComparisonReport]]:
        geom = ReceiverGeometry(rr=params.rr)
        want_sim = cfg.mode in (RunMode.SIMULATE, RunMode.COMPARE)
        want_analytic = cfg.mode in (RunMode.ANALYTIC, RunMode.COMPARE)

        tasks = []
        if want_analytic:
            tasks.append(self.analytic_curve(cfg, params, label))
        if want_sim:
            # once per variant; trials run with warn=False
            adsorption_probability(params.k1, cfg.sim.dt, params.D)
            logger.info(f"Dispatching {cfg.sim.trials} trials for variant '{label or 'base'}'")
            tasks.append(self.simulate(params, geom, cfg.sim, executor))
        results = await asyncio.gather(*tasks)

        series: List[SampleSeries] = []
        analytic = results[0] if want_analytic else None
        if analytic is not None:
            series.append(analytic)
        if not want_sim:
            return series, None

        mean, stderr = summarize_trials(results[-1], cfg.sim, label)
        series.extend([mean, stderr])
        if analytic is None:
            return series, None

        report = compare_series(analytic, mean, stderr, cfg.sim.trials, label)
        z_values = [w.z for w in report.windows]
        series.append(
            SampleSeries(name=column_name("z", label), ts=cfg.sim.ts, t_grid=cfg.sim.window_starts(), values=z_values)
        )
        if report.passed:
            logger.info(report.summary_line())
        else:
            logger.warning(report.summary_line())
        return series, report

    async def run(self, cfg: ExperimentConfig, write: bool = True) -> ExperimentOutcome:
        """Run all variants; on failure flush completed series with a marker row and re-raise."""
        started = time.perf_counter()
        variants = cfg.variants()
        logger.info(f"Running {len(variants)} variant(s) in {cfg.mode.value} mode")

        series: List[SampleSeries] = []
        reports: List[ComparisonReport] = []
        workers = min(settings.threads, cfg.sim.trials)
        needs_pool = cfg.mode != RunMode.ANALYTIC and workers > 1
        executor = ProcessPoolExecutor(max_workers=workers) if needs_pool else None

        try:
            for variant in variants:
                produced, report = await self._run_variant(cfg, variant.channel, variant.label, executor)
                series.extend(produced)
                if report is not None:
                    reports.append(report)
        except Exception as e:
            logger.error(f"Experiment failed after {len(series)} series: {type(e).__name__}: {e}")
            if write:
                write_csv(series, cfg.output_path, failure=e)
                write_metadata(cfg.output_path, cfg, time.perf_counter() - started, reports, failure=e)
            raise
        finally:
            if executor is not None:
                executor.shutdown(wait=True)

        runtime = time.perf_counter() - started
        outcome = ExperimentOutcome(config=cfg, series=series, reports=reports, runtime_seconds=runtime)
        if write:
            outcome.csv_path = str(write_csv(series, cfg.output_path))
            outcome.meta_path = str(write_metadata(cfg.output_path, cfg, runtime, reports))
        logger.info(f"Experiment finished in {runtime:.2f}s")
        return outcome


# Global experiment runner instance
experiment_runner = ExperimentRunner()


async def run_experiment(cfg: ExperimentConfig, write: bool = True) -> ExperimentOutcome:
    return await experiment_runner.run(cfg, write=write)
