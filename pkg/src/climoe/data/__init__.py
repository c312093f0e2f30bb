from climoe.data.grid import GridSpec
from climoe.data.scaling import (
    NormStats,
    apply_norm,
    fit_norm,
    fuse,
    fuse_sum,
    fit_fused_scale,
    invert_norm,
    load_norm_stats,
    save_norm_stats,
)
from climoe.data.series import FrameSeries, load_series, save_series
from climoe.data.variables import (
    GROUP_FEATURES,
    GROUPS,
    N_FEATURES,
    VARIABLES,
    VariableMeta,
    group_mask,
    variable_by_id,
)
from climoe.data.windows import (
    DEFAULT_WINDOW,
    SampleSet,
    build_dataset,
    make_samples,
    split_counts,
    training_hours,
)

__all__ = [
    "GridSpec",
    "FrameSeries",
    "VariableMeta",
    "NormStats",
    "SampleSet",
    "VARIABLES",
    "GROUPS",
    "GROUP_FEATURES",
    "N_FEATURES",
    "DEFAULT_WINDOW",
    "variable_by_id",
    "group_mask",
    "load_series",
    "save_series",
    "fit_norm",
    "apply_norm",
    "invert_norm",
    "fuse",
    "fuse_sum",
    "fit_fused_scale",
    "save_norm_stats",
    "load_norm_stats",
    "make_samples",
    "build_dataset",
    "split_counts",
    "training_hours",
]
