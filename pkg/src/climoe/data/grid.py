"""Spatial grid geometry shared by every frame."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from climoe.errors import SchemaError


@dataclass(frozen=True)
class GridSpec:
    """Regular lat/lon grid; row 0 is the northern edge, row-major storage."""

    rows: int = 100
    cols: int = 100
    spacing_km: float = 3.0
    lat_min: float = 24.5
    lat_max: float = 31.0
    lon_min: float = -87.0
    lon_max: float = -80.0
    vertical_levels: int = 50

    def __post_init__(self):
        if self.rows <= 0 or self.cols <= 0:
            raise SchemaError("grid must have positive row and column counts")
        if not (self.lat_min < self.lat_max and self.lon_min < self.lon_max):
            raise SchemaError("grid bounds must satisfy lat_min < lat_max and lon_min < lon_max")
        if self.spacing_km <= 0:
            raise SchemaError("grid spacing must be positive")

    @property
    def n_cells(self) -> int:
        return self.rows * self.cols

    def cell_center(self, row: int, col: int) -> tuple[float, float]:
        """(lat, lon) of a cell center interpolated over the bounds box."""
        lat = self.lat_max - (row + 0.5) * (self.lat_max - self.lat_min) / self.rows
        lon = self.lon_min + (col + 0.5) * (self.lon_max - self.lon_min) / self.cols
        return lat, lon

    def cell_xy_km(self) -> tuple[np.ndarray, np.ndarray]:
        """Planar (x, y) km coordinates of every cell center, row-major.

        x grows eastward from the west edge, y northward from the south edge.
        """
        r = np.arange(self.rows)
        c = np.arange(self.cols)
        y = ((self.rows - 1 - r) + 0.5) * self.spacing_km
        x = (c + 0.5) * self.spacing_km
        xx, yy = np.meshgrid(x, y)
        return xx.ravel(), yy.ravel()

    def latlon_to_xy_km(self, lat: float, lon: float) -> tuple[float, float]:
        """Map geographic coordinates onto the planar km frame of the grid."""
        fx = (lon - self.lon_min) / (self.lon_max - self.lon_min)
        fy = (lat - self.lat_min) / (self.lat_max - self.lat_min)
        return fx * self.cols * self.spacing_km, fy * self.rows * self.spacing_km

    def to_dict(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "spacing_km": self.spacing_km,
            "lat_min": self.lat_min,
            "lat_max": self.lat_max,
            "lon_min": self.lon_min,
            "lon_max": self.lon_max,
            "vertical_levels": self.vertical_levels,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GridSpec":
        return cls(
            rows=int(d["rows"]),
            cols=int(d["cols"]),
            spacing_km=float(d["spacing_km"]),
            lat_min=float(d["lat_min"]),
            lat_max=float(d["lat_max"]),
            lon_min=float(d["lon_min"]),
            lon_max=float(d["lon_max"]),
            vertical_levels=int(d.get("vertical_levels", 50)),
        )
