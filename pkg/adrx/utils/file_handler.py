"""
Result file writing: plot-ready CSV and the JSON metadata sidecar
"""

import csv
import json
import subprocess
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from loguru import logger

from .. import __version__
from ..models import ComparisonReport, ExperimentConfig, RunFailure, RunMetadata, SampleSeries

FAILURE_MARKER = "#FAILED"
META_SUFFIX = ".meta"


class OutputWriteError(Exception):
    """Custom exception for result files that cannot be written"""
    pass


def format_time(t: float) -> str:
    return f"{t:.9f}"


def format_value(v: float) -> str:
    """Nine significant digits; negative zero printed as zero."""
    return f"{v + 0.0:#.9g}"


def write_csv(
    series: Sequence[SampleSeries],
    path: Union[str, Path],
    failure: Optional[BaseException] = None,
) -> Path:
    """Write ``t_start,t_end,<names>`` plus one row per window.

    All series must share one window grid. With ``failure`` a trailing
    ``#FAILED,<ExceptionName>,<message>`` row is appended.
    """
    path = Path(path)
    series = list(series)
    for s in series[1:]:
        if not s.shares_grid_with(series[0]):
            raise ValueError(f"series '{s.name}' does not share the grid of '{series[0].name}'")

    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["t_start", "t_end"] + [s.name for s in series])
            if series:
                first = series[0]
                for k, (t0, t1) in enumerate(zip(first.t_grid, first.t_end_grid)):
                    writer.writerow(
                        [format_time(t0), format_time(t1)] + [format_value(s.values[k]) for s in series]
                    )
            if failure is not None:
                writer.writerow([FAILURE_MARKER, type(failure).__name__, str(failure)])
    except OSError as e:
        raise OutputWriteError(f"cannot write {path}: {e}")

    logger.info(f"Wrote {len(series)} series to {path}")
    return path


def version_string() -> str:
    """``git describe`` of the source tree, or the package version outside a checkout."""
    try:
        result = subprocess.run(
            ["git", "describe", "--tags", "--always", "--dirty"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True,
            text=True,
            timeout=5,
        )
        if result.returncode == 0 and result.stdout.strip():
            return result.stdout.strip()
    except (OSError, subprocess.SubprocessError):
        pass
    return f"v{__version__}"


def meta_path_for(csv_path: Union[str, Path]) -> Path:
    return Path(csv_path).with_suffix(META_SUFFIX)


def write_metadata(
    csv_path: Union[str, Path],
    config: ExperimentConfig,
    runtime_seconds: float,
    reports: Sequence[ComparisonReport] = (),
    failure: Optional[BaseException] = None,
) -> Path:
    """JSON sidecar next to the CSV: resolved config, seed, version, runtime.

    Non-finite floats are written as the strings "Infinity", "-Infinity" and "NaN".
    """
    path = meta_path_for(csv_path)
    metadata = RunMetadata(
        config=config,
        seed=config.sim.seed,
        version=version_string(),
        runtime_seconds=round(runtime_seconds, 3),
        reports=list(reports),
        failure=None if failure is None else RunFailure(type=type(failure).__name__, message=str(failure)),
    )

    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        text = metadata.model_dump_json(indent=2, exclude={"failure"} if failure is None else None)
        path.write_text(text + "\n", encoding="utf-8")
    except OSError as e:
        raise OutputWriteError(f"cannot write {path}: {e}")
    logger.info(f"Wrote metadata to {path}")
    return path


def read_metadata(path: Union[str, Path]) -> Dict[str, Any]:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def read_csv_rows(path: Union[str, Path]) -> List[List[str]]:
    with Path(path).open(newline="", encoding="utf-8") as handle:
        return list(csv.reader(handle))
