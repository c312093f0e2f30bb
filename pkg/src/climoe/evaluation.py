"""Regression metrics, the multi-seed experiment harness, and reports."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from climoe import rng
from climoe.bundle import dataset_fingerprint
from climoe.data.series import load_series
from climoe.data.windows import DEFAULT_WINDOW, SampleSet, build_dataset
from climoe.errors import ClimoeError, ConfigError, ShapeError
from climoe.moe import VARIANTS, VariantConfig, train_variant

_SUBSAMPLE_TAG = 0x5B


def metrics(y: np.ndarray, yhat: np.ndarray) -> tuple[float, float, float]:
    """(MAE, MSE, RMSE) over paired samples."""
    y = np.asarray(y, dtype=np.float64)
    yhat = np.asarray(yhat, dtype=np.float64)
    if y.shape != yhat.shape:
        raise ShapeError(f"length mismatch: {y.shape} vs {yhat.shape}")
    if y.size == 0:
        raise ShapeError("metrics need at least one sample")
    diff = y - yhat
    mae = float(np.mean(np.abs(diff)))
    mse = float(np.mean(diff * diff))
    return mae, mse, float(np.sqrt(mse))


@dataclass(frozen=True)
class RunResult:
    variant: str
    seed: int
    mae: float
    mse: float
    rmse: float
    n_test: int
    runtime_seconds: float


@dataclass(frozen=True)
class VariantAggregate:
    variant: str
    n_runs: int
    mae_mean: float
    mae_std: float
    mse_mean: float
    mse_std: float
    rmse_mean: float
    rmse_std: float


@dataclass(frozen=True)
class ExperimentConfig:
    """Harness knobs: model config plus desk-scale subsampling."""

    model: VariantConfig = field(default_factory=VariantConfig)
    window: int = DEFAULT_WINDOW
    train_subsample: int | None = 8000
    test_subsample: int | None = 30000
    subsample_seed: int = 0

    def to_dict(self) -> dict:
        d = {
            "window": self.window,
            "train_subsample": self.train_subsample,
            "test_subsample": self.test_subsample,
            "subsample_seed": self.subsample_seed,
        }
        m = self.model
        d["model"] = {
            "n_experts": m.n_experts,
            "all_expert_epochs": m.resolved_all_expert_epochs(),
            "expert_hidden": list(m.expert_hidden),
            "router_hidden": list(m.router_hidden),
            "baseline_hidden": list(m.baseline_hidden),
            "expert_epochs": m.expert_epochs,
            "router_epochs": m.router_epochs,
            "joint_epochs": m.joint_epochs,
            "baseline_epochs": m.baseline_epochs,
            "batch_size": m.batch_size,
            "lambda_div": m.lambda_div,
            "tau": m.tau,
            "learning_rate": m.learning_rate,
            "optimizer": m.optimizer,
        }
        return d


@dataclass
class MetricsReport:
    dataset_fingerprint: str
    config: dict
    runs: list[RunResult]
    aggregates: list[VariantAggregate]

    def to_dict(self) -> dict:
        """Canonical report content; excludes wall-clock runtimes so that
        identical experiments serialize to identical bytes."""
        return {
            "dataset_fingerprint": self.dataset_fingerprint,
            "config": self.config,
            "runs": [
                {
                    "variant": r.variant,
                    "seed": r.seed,
                    "mae": r.mae,
                    "mse": r.mse,
                    "rmse": r.rmse,
                    "n_test": r.n_test,
                }
                for r in self.runs
            ],
            "aggregates": [
                {
                    "variant": a.variant,
                    "n_runs": a.n_runs,
                    "mae_mean": a.mae_mean,
                    "mae_std": a.mae_std,
                    "mse_mean": a.mse_mean,
                    "mse_std": a.mse_std,
                    "rmse_mean": a.rmse_mean,
                    "rmse_std": a.rmse_std,
                }
                for a in self.aggregates
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _subsample(n_total: int, limit: int | None, key: int) -> np.ndarray | None:
    if limit is None or limit >= n_total:
        return None
    return np.sort(rng.permutation(key, n_total)[:limit])


def _partition_arrays(samples: SampleSet, partition: str, limit: int | None, key: int):
    idx = _subsample(samples.sample_count(partition), limit, key)
    return samples.inputs(partition, idx), samples.targets(partition, idx)


def training_subset(samples: SampleSet, limit: int | None, subsample_seed: int = 0):
    """Deterministic desk-scale train subset, shared by CLI and harness."""
    key = rng.mix_key(subsample_seed, _SUBSAMPLE_TAG)
    return _partition_arrays(samples, "train", limit, rng.mix_key(key, 0))


def heldout_test_subset(samples: SampleSet, limit: int | None, subsample_seed: int = 0):
    """Deterministic test subset drawn from the test partition only."""
    key = rng.mix_key(subsample_seed, _SUBSAMPLE_TAG)
    return _partition_arrays(samples, "test", limit, rng.mix_key(key, 1))


def run_experiment(
    data_dir: str | Path,
    variants: list[str],
    seeds: list[int],
    cfg: ExperimentConfig | None = None,
) -> MetricsReport:
    """Train and score every (variant, seed) pair on one dataset."""
    cfg = cfg or ExperimentConfig()
    if not seeds:
        raise ConfigError("need at least one seed")
    for v in variants:
        if v not in VARIANTS:
            raise ConfigError(f"unknown variant {v!r}")

    fingerprint = dataset_fingerprint(data_dir)
    series = load_series(data_dir)
    _, samples = build_dataset(series, cfg.window)
    Xtr, ytr = training_subset(samples, cfg.train_subsample, cfg.subsample_seed)
    Xte, yte = heldout_test_subset(samples, cfg.test_subsample, cfg.subsample_seed)

    runs: list[RunResult] = []
    for variant in variants:
        for seed in seeds:
            t0 = time.perf_counter()
            try:
                predictor, _ = train_variant(variant, (Xtr, ytr), replace(cfg.model, seed=seed))
            except ClimoeError as exc:
                raise type(exc)(f"variant {variant!r}, seed {seed}: {exc}") from exc
            pred = predictor.predict(Xte)
            mae, mse, rmse = metrics(yte, pred)
            runs.append(
                RunResult(
                    variant=variant,
                    seed=seed,
                    mae=mae,
                    mse=mse,
                    rmse=rmse,
                    n_test=int(yte.size),
                    runtime_seconds=time.perf_counter() - t0,
                )
            )

    aggregates = []
    for variant in variants:
        vals = {m: [getattr(r, m) for r in runs if r.variant == variant] for m in ("mae", "mse", "rmse")}
        n = len(vals["mae"])
        agg = {"variant": variant, "n_runs": n}
        for m in ("mae", "mse", "rmse"):
            arr = np.asarray(vals[m])
            agg[f"{m}_mean"] = float(arr.mean())
            agg[f"{m}_std"] = float(arr.std(ddof=1)) if n > 1 else 0.0
        aggregates.append(VariantAggregate(**agg))

    return MetricsReport(
        dataset_fingerprint=fingerprint,
        config={**cfg.to_dict(), "variants": list(variants), "seeds": list(seeds)},
        runs=runs,
        aggregates=aggregates,
    )


def _fmt(mean: float, std: float) -> str:
    return f"{mean:.3f} (± {std:.3f})"


def render_report_dict(d: dict) -> str:
    """Text table (rows per variant, MAE/MSE/RMSE as mean (± std))."""
    header = f"{'Variant':<20} {'MAE':<18} {'MSE':<18} {'RMSE':<18}"
    lines = [header, "-" * len(header)]
    for a in d["aggregates"]:
        lines.append(
            f"{a['variant']:<20} "
            f"{_fmt(a['mae_mean'], a['mae_std']):<18} "
            f"{_fmt(a['mse_mean'], a['mse_std']):<18} "
            f"{_fmt(a['rmse_mean'], a['rmse_std']):<18}"
        )
    return "\n".join(line.rstrip() for line in lines) + "\n"


def render_report(report: MetricsReport) -> str:
    return render_report_dict(report.to_dict())


def save_report(report: MetricsReport, path: str | Path) -> None:
    Path(path).write_text(report.to_json())


def load_report(path: str | Path) -> dict:
    return json.loads(Path(path).read_text())
