"""Windowed supervised samples and the chronological 7:1:2 split.

A sample anchors at hour t: its input is the normalized value of every
variable over the window t-N+1..t (feature-major, time-minor layout) and its
target is the raw precipitation rate at t+1. Anchors stride one hour;
partitions cover anchors chronologically in the ratio 7:1:2 (train and val
rounded down, remainder to test).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from climoe.data.scaling import NormStats, fit_norm
from climoe.data.series import FrameSeries, format_display
from climoe.data.variables import N_FEATURES, PRECIP_RATE_ID
from climoe.errors import ConfigError, SchemaError, ShapeError

PARTITIONS = ("train", "val", "test")

DEFAULT_WINDOW = 6


def split_counts(n_anchors: int) -> tuple[int, int, int]:
    """7:1:2 anchor counts; train and val floor, remainder to test."""
    n_train = int(np.floor(0.7 * n_anchors))
    n_val = int(np.floor(0.1 * n_anchors))
    return n_train, n_val, n_anchors - n_train - n_val


def training_hours(n_hours: int, window: int) -> np.ndarray:
    """Hour indices visible to training: everything up to the last train anchor."""
    n_train, _, _ = split_counts(n_hours - window)
    if n_train < 1:
        raise ShapeError("series too short to form a training partition")
    last_train_anchor = (window - 1) + n_train - 1
    return np.arange(0, last_train_anchor + 1)


@dataclass(frozen=True)
class SampleSet:
    """Windowed samples over a series; inputs materialize on demand.

    Within a partition, samples are ordered anchor-major then cell-major, so
    sample ``k`` is (anchor k // n_cells of the partition, cell k % n_cells).
    """

    series: FrameSeries
    stats: NormStats
    window: int
    anchors: np.ndarray  # ascending 0-based hour indices, one per anchor
    counts: tuple[int, int, int]  # (train, val, test) anchor counts

    @property
    def n_cells(self) -> int:
        return self.series.grid.n_cells

    @property
    def n_anchors(self) -> int:
        return int(self.anchors.size)

    @property
    def n_samples(self) -> int:
        return self.n_anchors * self.n_cells

    @property
    def input_dim(self) -> int:
        return N_FEATURES * self.window

    def partition_anchors(self, partition: str) -> np.ndarray:
        if partition not in PARTITIONS:
            raise ConfigError(f"unknown partition {partition!r}")
        n_train, n_val, _ = self.counts
        if partition == "train":
            return self.anchors[:n_train]
        if partition == "val":
            return self.anchors[n_train : n_train + n_val]
        return self.anchors[n_train + n_val :]

    def sample_count(self, partition: str) -> int:
        return int(self.partition_anchors(partition).size) * self.n_cells

    def _locate(self, partition: str, indices: np.ndarray | None) -> tuple[np.ndarray, np.ndarray]:
        """(anchor hour, cell) per requested sample of a partition."""
        anchors = self.partition_anchors(partition)
        total = anchors.size * self.n_cells
        if indices is None:
            idx = np.arange(total)
        else:
            idx = np.asarray(indices, dtype=np.int64)
            if idx.size and (idx.min() < 0 or idx.max() >= total):
                raise ShapeError(f"sample index outside 0..{total - 1}")
        return anchors[idx // self.n_cells], idx % self.n_cells

    def inputs(self, partition: str, indices: np.ndarray | None = None) -> np.ndarray:
        """Normalized input matrix (n, 19*window), feature-major time-minor."""
        anchor_hours, cells = self._locate(partition, indices)
        W = self.window
        offsets = np.arange(-W + 1, 1)
        hour_grid = anchor_hours[:, None] + offsets[None, :]
        X = np.empty((anchor_hours.size, N_FEATURES * W))
        for fid in range(1, N_FEATURES + 1):
            tbl = self.series.table(fid)
            raw = tbl[hour_grid, cells[:, None]]
            lo, hi = self.stats.minmax(fid)
            col = slice((fid - 1) * W, fid * W)
            if hi == lo:
                X[:, col] = 0.0
            else:
                X[:, col] = np.clip((raw - lo) / (hi - lo), 0.0, 1.0)
        return X

    def targets(self, partition: str, indices: np.ndarray | None = None) -> np.ndarray:
        """Raw precipitation rate one hour past each anchor."""
        anchor_hours, cells = self._locate(partition, indices)
        return self.series.table(PRECIP_RATE_ID)[anchor_hours + 1, cells]

    def provenance(self, partition: str, indices: np.ndarray | None = None) -> list[tuple[int, str]]:
        """(cell index, anchor timestamp) per sample."""
        anchor_hours, cells = self._locate(partition, indices)
        ts = self.series.timestamps
        return [(int(c), format_display(ts[int(a)])) for a, c in zip(anchor_hours, cells)]


def make_samples(series: FrameSeries, stats: NormStats, window: int = DEFAULT_WINDOW) -> SampleSet:
    """Slide a window of `window` hours over every cell, stride one hour."""
    if window < 1:
        raise ConfigError("window must be at least 1")
    T = series.n_hours
    if T < window + 1:
        raise ShapeError(f"series too short: {T} hours < window {window} + 1")
    anchors = np.arange(window - 1, T - 1)
    counts = split_counts(anchors.size)
    return SampleSet(series=series, stats=stats, window=window, anchors=anchors, counts=counts)


def build_dataset(series: FrameSeries, window: int = DEFAULT_WINDOW) -> tuple[NormStats, SampleSet]:
    """Fit leakage-free norm stats, then window the series."""
    stats = fit_norm(series, training_hours(series.n_hours, window))
    return stats, make_samples(series, stats, window)
