"""Adaptive mixture-of-experts precipitation forecasting on gridded climate data."""

__version__ = "0.1.0"

from climoe.data import (
    FrameSeries,
    GridSpec,
    NormStats,
    SampleSet,
    VariableMeta,
    build_dataset,
    load_series,
    make_samples,
    save_series,
)
from climoe.evaluation import ExperimentConfig, metrics, run_experiment
from climoe.moe import (
    ExpertPool,
    RouterModel,
    TrainConfig,
    VariantConfig,
    diversity_loss,
    predict,
    train_experts,
    train_router,
    train_variant,
)
from climoe.nn import MlpSpec, OptimState, ParamVector, backward, forward, init_params, optimizer_step
from climoe.synth import StormConfig, generate

__all__ = [
    "GridSpec",
    "FrameSeries",
    "VariableMeta",
    "NormStats",
    "SampleSet",
    "MlpSpec",
    "ParamVector",
    "OptimState",
    "ExpertPool",
    "RouterModel",
    "TrainConfig",
    "VariantConfig",
    "ExperimentConfig",
    "StormConfig",
    "init_params",
    "forward",
    "backward",
    "optimizer_step",
    "load_series",
    "save_series",
    "build_dataset",
    "make_samples",
    "generate",
    "diversity_loss",
    "train_experts",
    "train_router",
    "train_variant",
    "predict",
    "metrics",
    "run_experiment",
]
