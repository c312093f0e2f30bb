"""Frame storage: the in-memory dataset cube and its directory layout.

On disk a dataset is ``meta.json`` plus one ``var_{id}/`` directory per
variable holding one rows-by-cols CSV per hour. File names use the colon-free
``YYYY-MM-DD_HHMM`` stamp; everything user-facing renders ``YYYY-MM-DD HH:MM``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timedelta
from pathlib import Path

import numpy as np
import pandas as pd

from climoe.data.grid import GridSpec
from climoe.data.variables import (
    N_FEATURES,
    PRECIP_RATE_ID,
    TOTAL_PRECIP_ID,
    VariableMeta,
    validate_registry,
)
from climoe.errors import SchemaError

DISPLAY_FMT = "%Y-%m-%d %H:%M"
FILE_FMT = "%Y-%m-%d_%H%M"

HOUR = timedelta(hours=1)


def format_display(ts: datetime) -> str:
    return ts.strftime(DISPLAY_FMT)


def parse_display(text: str) -> datetime:
    try:
        return datetime.strptime(text, DISPLAY_FMT)
    except ValueError as exc:
        raise SchemaError(f"bad timestamp {text!r}, expected YYYY-MM-DD HH:MM") from exc


def format_filename(ts: datetime) -> str:
    return ts.strftime(FILE_FMT)


@dataclass(frozen=True)
class FrameSeries:
    """Dense hourly cube: values[feature_id-1, t, row, col]."""

    grid: GridSpec
    variables: tuple[VariableMeta, ...]
    timestamps: tuple[datetime, ...]
    values: np.ndarray

    def __post_init__(self):
        validate_registry(list(self.variables))
        if list(v.feature_id for v in self.variables) != list(range(1, N_FEATURES + 1)):
            raise SchemaError("variables must be ordered by feature_id")
        ts = self.timestamps
        if len(ts) < 1:
            raise SchemaError("series has no timestamps")
        for a, b in zip(ts, ts[1:]):
            if b - a != HOUR:
                raise SchemaError(f"timestamps must advance in 1-hour steps, got {a} -> {b}")
        expected = (N_FEATURES, len(ts), self.grid.rows, self.grid.cols)
        if self.values.shape != expected:
            raise SchemaError(f"value cube shape {self.values.shape} != {expected}")
        if not np.isfinite(self.values).all():
            raise SchemaError("value cube contains non-finite entries")
        for fid in (PRECIP_RATE_ID, TOTAL_PRECIP_ID):
            if np.any(self.values[fid - 1] < 0.0):
                raise SchemaError(f"variable {fid} must be non-negative")

    @property
    def n_hours(self) -> int:
        return len(self.timestamps)

    def frame(self, feature_id: int, t_index: int) -> np.ndarray:
        """One rows-by-cols grid."""
        return self.values[feature_id - 1, t_index]

    def table(self, feature_id: int) -> np.ndarray:
        """(T, n_cells) row-major view of one variable."""
        T = self.n_hours
        return self.values[feature_id - 1].reshape(T, self.grid.n_cells)

    def display_timestamps(self) -> list[str]:
        return [format_display(t) for t in self.timestamps]


def _frame_path(root: Path, feature_id: int, ts: datetime) -> Path:
    return root / f"var_{feature_id}" / f"{format_filename(ts)}.csv"


def save_series(series: FrameSeries, out_dir: str | Path) -> None:
    """Write meta.json and per-variable CSV frames (%.6f cells)."""
    root = Path(out_dir)
    root.mkdir(parents=True, exist_ok=True)
    meta = {
        "format": "climoe-dataset",
        "version": 1,
        "grid": series.grid.to_dict(),
        "variables": [v.to_dict() for v in series.variables],
        "timestamps": series.display_timestamps(),
    }
    (root / "meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    rows, cols = series.grid.rows, series.grid.cols
    # One printf over the flattened frame: much faster than per-cell formatting.
    fmt = ((",".join(["%.6f"] * cols)) + "\n") * rows
    for var in series.variables:
        vdir = root / f"var_{var.feature_id}"
        vdir.mkdir(exist_ok=True)
        for t_idx, ts in enumerate(series.timestamps):
            frame = series.frame(var.feature_id, t_idx)
            _frame_path(root, var.feature_id, ts).write_text(fmt % tuple(frame.ravel()))


def _read_frame(path: Path, rows: int, cols: int) -> np.ndarray:
    try:
        df = pd.read_csv(path, header=None, dtype=np.float64)
    except ValueError:
        _locate_bad_cell(path)
        raise SchemaError(f"{path}: non-numeric content")  # pragma: no cover
    arr = df.to_numpy(dtype=np.float64)
    if arr.shape != (rows, cols):
        raise SchemaError(f"{path}: frame shape {arr.shape} != ({rows}, {cols})")
    return arr


def _locate_bad_cell(path: Path) -> None:
    for r, line in enumerate(path.read_text().splitlines()):
        for c, tok in enumerate(line.split(",")):
            try:
                float(tok)
            except ValueError:
                raise SchemaError(f"{path}: non-numeric cell at row {r}, col {c}: {tok!r}")
    raise SchemaError(f"{path}: malformed CSV")


def load_series(data_dir: str | Path) -> FrameSeries:
    """Load and fully validate a dataset directory."""
    root = Path(data_dir)
    meta_path = root / "meta.json"
    if not meta_path.is_file():
        raise SchemaError(f"{root}: no variables found (missing meta.json)")
    try:
        meta = json.loads(meta_path.read_text())
    except ValueError as exc:
        raise SchemaError(f"{meta_path}: invalid JSON: {exc}") from exc

    grid = GridSpec.from_dict(meta["grid"])
    variables = tuple(VariableMeta.from_dict(d) for d in meta["variables"])
    timestamps = tuple(parse_display(t) for t in meta["timestamps"])
    if not timestamps:
        raise SchemaError(f"{meta_path}: empty timestamp list")

    values = np.empty((N_FEATURES, len(timestamps), grid.rows, grid.cols))
    ordered = sorted(variables, key=lambda v: v.feature_id)
    for var in ordered:
        vdir = root / f"var_{var.feature_id}"
        if not vdir.is_dir():
            raise SchemaError(f"{root}: missing variable directory var_{var.feature_id}")
        for t_idx, ts in enumerate(timestamps):
            fpath = _frame_path(root, var.feature_id, ts)
            if not fpath.is_file():
                raise SchemaError(
                    f"variable {var.feature_id}: missing hour {format_display(ts)} "
                    f"(expected {fpath.name})"
                )
            values[var.feature_id - 1, t_idx] = _read_frame(fpath, grid.rows, grid.cols)

    return FrameSeries(grid=grid, variables=ordered_tuple(ordered), timestamps=timestamps, values=values)


def ordered_tuple(variables) -> tuple[VariableMeta, ...]:
    return tuple(sorted(variables, key=lambda v: v.feature_id))
