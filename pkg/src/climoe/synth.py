"""Deterministic synthetic hurricane-landfall dataset generator.

A vortex crosses the grid along a straight track. Precipitation is a sum of
rotating, hard-truncated Gaussian rainbands around the moving center; every
other variable is a bounded, strongly coupled transform of the storm geometry
or of precipitation, plus SplitMix64 noise keyed by (seed, variable, hour).
Identical configs produce byte-identical datasets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timedelta
from pathlib import Path

import numpy as np

from climoe import rng
from climoe.data.grid import GridSpec
from climoe.data.series import FrameSeries, save_series
from climoe.data.variables import N_FEATURES, VARIABLES
from climoe.errors import ConfigError

DEFAULT_START_TIME = datetime(2022, 9, 23, 0, 0)

# Noise scale per variable family (units of the variable).
DEFAULT_NOISE = {
    "precip": 0.45,
    "wind": 0.4,
    "temp": 0.25,
    "cloud": 1.5,
    "pressure": 60.0,
    "moisture": 0.8,
    "radiation": 1.2,
}

FAMILY_OF = {
    1: "precip",
    2: "cloud",
    3: "moisture",
    4: "radiation",
    5: "wind",
    6: "temp",
    7: "pressure",
    8: "wind",
    9: "wind",
    10: "temp",
    11: "moisture",
    12: "precip",
    13: "cloud",
    14: "cloud",
    15: "pressure",
    16: "moisture",
    17: "radiation",
    18: "radiation",
    19: "radiation",
}

_BAND_TRUNC = 5.0  # hard cutoff, in units of each band's radius
_OMEGA = 0.35  # rainband rotation, rad/hour


@dataclass(frozen=True)
class StormConfig:
    seed: int
    days: int = 9
    track_start: tuple[float, float] = (25.2, -80.6)  # (lat, lon)
    track_end: tuple[float, float] = (30.2, -86.2)
    radius_km: float = 40.0
    rainbands: int = 3
    noise_sigma: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_NOISE))
    start_time: datetime = DEFAULT_START_TIME

    def __post_init__(self):
        if self.days < 1:
            raise ConfigError("days must be at least 1")
        if self.radius_km <= 0:
            raise ConfigError("radius_km must be positive")
        if self.rainbands < 1:
            raise ConfigError("need at least one rainband")

    def sigma(self, family: str) -> float:
        return float(self.noise_sigma.get(family, 0.0))


def _noise(cfg: StormConfig, feature_id: int, t: int, n_cells: int) -> np.ndarray:
    key = rng.mix_key(cfg.seed, feature_id, t)
    return rng.normals(key, n_cells)


def band_geometry(cfg: StormConfig, grid: GridSpec, t: int) -> list[tuple[float, float, float, float]]:
    """Rainband centers at hour t as (x_km, y_km, radius_km, amplitude)."""
    T = cfg.days * 24
    frac = t / max(T - 1, 1)
    x0, y0 = grid.latlon_to_xy_km(*cfg.track_start)
    x1, y1 = grid.latlon_to_xy_km(*cfg.track_end)
    cx = x0 + frac * (x1 - x0)
    cy = y0 + frac * (y1 - y0)
    envelope = 0.55 + 0.45 * np.sin(np.pi * frac)
    bands = [(cx, cy, cfg.radius_km, 12.0 * envelope)]
    for k in range(cfg.rainbands):
        theta = 2.0 * np.pi * k / cfg.rainbands + _OMEGA * t
        dist = cfg.radius_km * (1.5 + 0.9 * k)
        bands.append(
            (
                cx + dist * np.cos(theta),
                cy + dist * np.sin(theta),
                0.6 * cfg.radius_km,
                7.0 * envelope,
            )
        )
    return bands


def _storm_center(cfg: StormConfig, grid: GridSpec, t: int) -> tuple[float, float]:
    return band_geometry(cfg, grid, t)[0][:2]


def _precip_field(cfg: StormConfig, grid: GridSpec, t: int, xx: np.ndarray, yy: np.ndarray) -> np.ndarray:
    p = np.zeros_like(xx)
    for bx, by, radius, amp in band_geometry(cfg, grid, t):
        d2 = (xx - bx) ** 2 + (yy - by) ** 2
        contrib = amp * np.exp(-d2 / (2.0 * radius * radius))
        p += np.where(d2 < (_BAND_TRUNC * radius) ** 2, contrib, 0.0)
    return p


def generate(cfg: StormConfig, grid: GridSpec | None = None) -> FrameSeries:
    """19 coupled variables over 24*days hourly frames; pure in (cfg, grid)."""
    grid = grid or GridSpec()
    T = cfg.days * 24
    n = grid.n_cells
    xx, yy = grid.cell_xy_km()
    northness = yy / (grid.rows * grid.spacing_km)

    x0, y0 = grid.latlon_to_xy_km(*cfg.track_start)
    x1, y1 = grid.latlon_to_xy_km(*cfg.track_end)
    track_len = float(np.hypot(x1 - x0, y1 - y0))
    steer_u = 4.0 * (x1 - x0) / track_len if track_len > 0 else 0.0
    steer_v = 4.0 * (y1 - y0) / track_len if track_len > 0 else 0.0

    values = np.zeros((N_FEATURES, T, n))

    for t in range(T):
        cx, cy = _storm_center(cfg, grid, t)
        dx = xx - cx
        dy = yy - cy
        dist = np.hypot(dx, dy)
        core = np.exp(-(dist**2) / (2.0 * (2.5 * cfg.radius_km) ** 2))

        # Precipitation rate: truncated rotating rainbands + non-negative noise.
        precip = _precip_field(cfg, grid, t, xx, yy)
        precip += cfg.sigma("precip") * np.abs(_noise(cfg, 1, t, n))
        values[0, t] = precip

        # Rotational wind around the center, Rankine-like profile; the speed
        # is derived from the noisy components so the identity is exact.
        safe = np.maximum(dist, 1e-9)
        speed = 35.0 * (safe / cfg.radius_km) * np.exp(1.0 - safe / cfg.radius_km)
        u = speed * (-dy / safe) + steer_u + cfg.sigma("wind") * _noise(cfg, 8, t, n)
        v = speed * (dx / safe) + steer_v + cfg.sigma("wind") * _noise(cfg, 9, t, n)
        values[7, t] = u
        values[8, t] = v
        values[4, t] = np.hypot(u, v)

        # Temperatures: smooth base with a diurnal cycle minus a core depression.
        diurnal = 1.5 * np.sin(2.0 * np.pi * (t % 24) / 24.0)
        temp = 299.0 - 2.0 * northness + diurnal - 6.0 * core
        values[5, t] = temp + cfg.sigma("temp") * _noise(cfg, 6, t, n)
        values[9, t] = temp - (4.5 - 3.5 * core) + cfg.sigma("temp") * _noise(cfg, 10, t, n)

        # Cloud covers: saturating in precipitation, clipped to [0, 100].
        for fid, scale_mm in ((2, 3.0), (13, 2.0), (14, 5.0)):
            cc = 100.0 * (1.0 - np.exp(-precip / scale_mm))
            cc += cfg.sigma("cloud") * _noise(cfg, fid, t, n)
            values[fid - 1, t] = np.clip(cc, 0.0, 100.0)

        # Pressures: base minus a radial falloff at the center.
        values[6, t] = 92000.0 - 2500.0 * core + cfg.sigma("pressure") * _noise(cfg, 7, t, n)
        values[14, t] = 38000.0 - 6000.0 * core + cfg.sigma("pressure") * _noise(cfg, 15, t, n)

        # Moisture family: bounded monotone transforms of precipitation.
        canopy = 1.5 * (1.0 - np.exp(-precip / 4.0))
        values[2, t] = canopy + cfg.sigma("moisture") * 0.02 * np.abs(_noise(cfg, 3, t, n))
        avail = 100.0 * (1.0 - np.exp(-precip / 6.0))
        values[10, t] = np.clip(avail + cfg.sigma("moisture") * _noise(cfg, 11, t, n), 0.0, 100.0)
        rh = 55.0 + 45.0 * (1.0 - np.exp(-precip / 5.0))
        values[15, t] = np.clip(rh + cfg.sigma("moisture") * _noise(cfg, 16, t, n), 0.0, 100.0)

        # Satellite brightness channels: base minus cloud-top cooling.
        cloud_frac = 1.0 - np.exp(-precip / 3.0)
        for fid, offset in ((4, 0.0), (17, 1.5), (18, -1.0), (19, 0.8)):
            sbt = 288.0 - 55.0 * cloud_frac + offset
            values[fid - 1, t] = sbt + cfg.sigma("radiation") * _noise(cfg, fid, t, n)

    # Total precipitation: exact running sum of the rate, per cell.
    values[11] = np.cumsum(values[0], axis=0)

    timestamps = tuple(cfg.start_time + timedelta(hours=h) for h in range(T))
    cube = values.reshape(N_FEATURES, T, grid.rows, grid.cols)
    return FrameSeries(grid=grid, variables=VARIABLES, timestamps=timestamps, values=cube)


def write_dataset(cfg: StormConfig, grid: GridSpec, out_dir: str | Path) -> FrameSeries:
    series = generate(cfg, grid)
    save_series(series, out_dir)
    return series
