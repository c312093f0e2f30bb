"""The 19-variable registry and knowledge-guided feature groups."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from climoe.errors import SchemaError

GROUPS = ("Momentum", "Temperature", "Moisture", "Mass", "Cloud", "Radiation")

N_FEATURES = 19


@dataclass(frozen=True)
class VariableMeta:
    feature_id: int
    name: str
    unit: str
    group: str
    description: str

    def __post_init__(self):
        if not 1 <= self.feature_id <= N_FEATURES:
            raise SchemaError(f"feature_id {self.feature_id} outside 1..{N_FEATURES}")
        if self.group not in GROUPS:
            raise SchemaError(f"unknown group {self.group!r}")

    def to_dict(self) -> dict:
        return {
            "feature_id": self.feature_id,
            "name": self.name,
            "unit": self.unit,
            "group": self.group,
            "description": self.description,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "VariableMeta":
        return cls(
            feature_id=int(d["feature_id"]),
            name=str(d["name"]),
            unit=str(d["unit"]),
            group=str(d["group"]),
            description=str(d["description"]),
        )


def _v(fid, name, unit, group, description):
    return VariableMeta(fid, name, unit, group, description)


VARIABLES: tuple[VariableMeta, ...] = (
    _v(1, "Precipitation rate", "mm/hour", "Moisture", "Instantaneous surface precipitation rate."),
    _v(2, "Cloud cover", "%", "Cloud", "Total cloud cover fraction of the cell."),
    _v(3, "Plant canopy surface water", "kg/m^2", "Moisture", "Water held on the plant canopy."),
    _v(4, "SBT collected by GOES 12 C3", "K", "Radiation", "Surface brightness temperature, GOES 12 channel 3."),
    _v(5, "Wind speed", "m/s", "Momentum", "Horizontal wind speed at the surface."),
    _v(6, "2 metre temperature", "K", "Temperature", "Air temperature two metres above ground."),
    _v(7, "Pressure:CloudBase", "Pa", "Mass", "Air pressure at the cloud base."),
    _v(8, "U component of wind", "m/s", "Momentum", "Eastward wind component."),
    _v(9, "V component of wind", "m/s", "Momentum", "Northward wind component."),
    _v(10, "Dew point temperature", "K", "Temperature", "Dew point two metres above ground."),
    _v(11, "Moisture availability", "%", "Moisture", "Fraction of soil moisture available for evaporation."),
    _v(12, "Total precipitation", "mm", "Moisture", "Accumulated precipitation since the start of the series."),
    _v(13, "Low cloud cover", "%", "Cloud", "Cloud cover of the low atmospheric layer."),
    _v(14, "Medium cloud cover", "%", "Cloud", "Cloud cover of the middle atmospheric layer."),
    _v(15, "Pressure:CloudTop", "Pa", "Mass", "Air pressure at the cloud top."),
    _v(16, "Relative humidity", "%", "Moisture", "Relative humidity two metres above ground."),
    _v(17, "SBT collected by GOES 12 C4", "K", "Radiation", "Surface brightness temperature, GOES 12 channel 4."),
    _v(18, "SBT collected by GOES 11 C3", "K", "Radiation", "Surface brightness temperature, GOES 11 channel 3."),
    _v(19, "SBT collected by GOES 11 C4", "K", "Radiation", "Surface brightness temperature, GOES 11 channel 4."),
)

GROUP_FEATURES: dict[str, tuple[int, ...]] = {
    "Momentum": (5, 8, 9),
    "Temperature": (6, 10),
    "Moisture": (1, 3, 11, 12, 16),
    "Mass": (7, 15),
    "Cloud": (2, 13, 14),
    "Radiation": (18, 19, 4, 17),
}

PRECIP_RATE_ID = 1
TOTAL_PRECIP_ID = 12


def variable_by_id(feature_id: int) -> VariableMeta:
    if not 1 <= feature_id <= N_FEATURES:
        raise SchemaError(f"unknown feature_id {feature_id}")
    return VARIABLES[feature_id - 1]


def validate_registry(variables: list[VariableMeta]) -> None:
    """Check uniqueness, 1..19 coverage, and group assignments."""
    ids = sorted(v.feature_id for v in variables)
    if ids != list(range(1, N_FEATURES + 1)):
        raise SchemaError(f"feature_ids must cover 1..{N_FEATURES} exactly, got {ids}")
    for v in variables:
        if v.feature_id not in GROUP_FEATURES[v.group]:
            raise SchemaError(
                f"feature {v.feature_id} ({v.name}) assigned to {v.group}, "
                f"expected {_group_of(v.feature_id)}"
            )


def _group_of(feature_id: int) -> str:
    for group, fids in GROUP_FEATURES.items():
        if feature_id in fids:
            return group
    raise SchemaError(f"feature {feature_id} missing from the group table")


def group_mask(group: str, window: int = 6) -> np.ndarray:
    """Boolean vector over the 19*window input slots covered by a group.

    Input slots are feature-major, time-minor: feature 1 occupies slots
    0..window-1, feature 2 the next window, and so on.
    """
    if group not in GROUP_FEATURES:
        raise SchemaError(f"unknown group {group!r}")
    mask = np.zeros(N_FEATURES * window, dtype=bool)
    for fid in GROUP_FEATURES[group]:
        start = (fid - 1) * window
        mask[start : start + window] = True
    return mask
