"""Min-max normalization fitted on the training partition, plus fusion.

Stats are fitted once on training hours and then applied everywhere; values
outside the fitted range clamp to [0, 1] instead of erroring because test
hours legitimately exceed training extremes during extreme weather. A
constant feature maps to 0.0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from climoe.data.series import FrameSeries
from climoe.data.variables import N_FEATURES
from climoe.errors import SchemaError, ShapeError


@dataclass(frozen=True)
class NormStats:
    """Per-variable (min, max) computed on training hours only."""

    mins: np.ndarray  # (19,)
    maxs: np.ndarray  # (19,)

    def __post_init__(self):
        if self.mins.shape != (N_FEATURES,) or self.maxs.shape != (N_FEATURES,):
            raise ShapeError("stats must hold one (min, max) per variable")
        if np.any(self.mins > self.maxs):
            raise SchemaError("min > max in normalization stats")

    def minmax(self, feature_id: int) -> tuple[float, float]:
        _check_fid(feature_id)
        return float(self.mins[feature_id - 1]), float(self.maxs[feature_id - 1])

    def to_dict(self) -> dict:
        return {
            str(fid): {"min": float(self.mins[fid - 1]), "max": float(self.maxs[fid - 1])}
            for fid in range(1, N_FEATURES + 1)
        }

    @classmethod
    def from_dict(cls, d: dict) -> "NormStats":
        mins = np.empty(N_FEATURES)
        maxs = np.empty(N_FEATURES)
        for fid in range(1, N_FEATURES + 1):
            entry = d[str(fid)]
            mins[fid - 1] = float(entry["min"])
            maxs[fid - 1] = float(entry["max"])
        return cls(mins, maxs)


def _check_fid(feature_id: int) -> None:
    if not 1 <= int(feature_id) <= N_FEATURES:
        raise SchemaError(f"unknown feature_id {feature_id}")


def fit_norm(series: FrameSeries, train_hours: list[int] | np.ndarray) -> NormStats:
    """Per-variable min/max over the given (training) hour indices only."""
    hours = np.asarray(train_hours, dtype=int)
    if hours.size == 0:
        raise ShapeError("training hours must be non-empty")
    sub = series.values[:, hours]
    mins = sub.min(axis=(1, 2, 3))
    maxs = sub.max(axis=(1, 2, 3))
    return NormStats(mins, maxs)


def apply_norm(stats: NormStats, value, feature_id: int):
    """(v - min) / (max - min), clamped to [0, 1]; constant feature -> 0."""
    lo, hi = stats.minmax(feature_id)
    v = np.asarray(value, dtype=np.float64)
    if hi == lo:
        out = np.zeros_like(v)
    else:
        out = np.clip((v - lo) / (hi - lo), 0.0, 1.0)
    return float(out) if np.isscalar(value) or out.ndim == 0 else out


def invert_norm(stats: NormStats, scaled, feature_id: int):
    """Inverse of apply_norm for in-range values of a non-degenerate feature."""
    lo, hi = stats.minmax(feature_id)
    v = np.asarray(scaled, dtype=np.float64)
    out = lo + v * (hi - lo)
    return float(out) if np.isscalar(scaled) or out.ndim == 0 else out


def save_norm_stats(stats: NormStats, path: str | Path) -> None:
    Path(path).write_text(json.dumps(stats.to_dict(), indent=2, sort_keys=True) + "\n")


def load_norm_stats(path: str | Path) -> NormStats:
    return NormStats.from_dict(json.loads(Path(path).read_text()))


def fuse_sum(primary: np.ndarray, aux: np.ndarray) -> np.ndarray:
    """Element-wise sum of two already-normalized vectors (pre-renorm)."""
    p = np.asarray(primary, dtype=np.float64)
    a = np.asarray(aux, dtype=np.float64)
    if p.shape != a.shape:
        raise ShapeError(f"fusion length mismatch: {p.shape} vs {a.shape}")
    return p + a


@dataclass(frozen=True)
class FusedScale:
    """Second-round min-max fitted over training fusion outputs."""

    lo: float
    hi: float

    def apply(self, fused: np.ndarray) -> np.ndarray:
        if self.hi == self.lo:
            return np.zeros_like(np.asarray(fused, dtype=np.float64))
        return np.clip((np.asarray(fused, dtype=np.float64) - self.lo) / (self.hi - self.lo), 0.0, 1.0)


def fit_fused_scale(train_primary: np.ndarray, train_aux: np.ndarray) -> FusedScale:
    s = fuse_sum(train_primary, train_aux)
    return FusedScale(lo=float(s.min()), hi=float(s.max()))


def fuse(primary: np.ndarray, aux: np.ndarray, scale: FusedScale) -> np.ndarray:
    """Element-wise sum followed by the fitted second-round rescale."""
    return scale.apply(fuse_sum(primary, aux))
