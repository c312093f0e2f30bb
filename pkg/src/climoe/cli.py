"""Command-line entry points: gen / train-experts / train-router / eval / serve."""

from __future__ import annotations

import sys
from dataclasses import replace
from pathlib import Path

import click

from climoe.errors import ClimoeError


def _parse_ints(text: str) -> tuple[int, ...]:
    return tuple(int(p) for p in text.split(",") if p.strip())


def _fail(exc: Exception) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(1)


@click.group()
def main():
    """Adaptive mixture-of-experts precipitation forecasting pipeline."""


@main.command()
@click.option("--out", required=True, type=click.Path(), help="Output dataset directory.")
@click.option("--seed", default=42, show_default=True, type=int)
@click.option("--days", default=9, show_default=True, type=int)
@click.option("--grid", "grid_size", default=100, show_default=True, type=int, help="Rows = cols of the grid.")
def gen(out, seed, days, grid_size):
    """Generate a synthetic hurricane dataset in the standard layout."""
    from climoe.data.grid import GridSpec
    from climoe.synth import StormConfig, write_dataset

    try:
        grid = GridSpec(rows=grid_size, cols=grid_size)
        write_dataset(StormConfig(seed=seed, days=days), grid, out)
    except ClimoeError as exc:
        _fail(exc)
    click.echo(f"wrote {out}")


def _load_training_arrays(data_dir: str, window: int, subsample: int | None, subsample_seed: int):
    from climoe.data.series import load_series
    from climoe.data.windows import build_dataset
    from climoe.evaluation import training_subset

    series = load_series(data_dir)
    stats, samples = build_dataset(series, window)
    X, y = training_subset(samples, subsample, subsample_seed)
    return stats, samples, X, y


@main.command("train-experts")
@click.option("--data", envvar="CLIMOE_DATA", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--out", required=True, type=click.Path(), help="Model bundle directory.")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--epochs", default=640, show_default=True, type=int)
@click.option("--lambda", "lambda_div", default=0.01, show_default=True, type=float)
@click.option("--tau", default=10.0, show_default=True, type=float)
@click.option("--batch-size", default=512, show_default=True, type=int)
@click.option("--experts", default=16, show_default=True, type=int)
@click.option("--hidden", default="64,64", show_default=True, help="Expert hidden layer sizes.")
@click.option("--window", default=6, show_default=True, type=int)
@click.option("--train-subsample", default=8000, show_default=True, type=int)
@click.option("--subsample-seed", default=0, show_default=True, type=int)
def train_experts_cmd(data, out, seed, epochs, lambda_div, tau, batch_size, experts, hidden, window, train_subsample, subsample_seed):
    """Pretrain the expert pool with the diversity regularizer."""
    from climoe.bundle import dataset_fingerprint, save_bundle
    from climoe.moe import TrainConfig, init_pool, train_experts
    from climoe.nn.mlp import MlpSpec

    try:
        stats, samples, X, y = _load_training_arrays(data, window, train_subsample, subsample_seed)
        spec = MlpSpec(input_dim=samples.input_dim, hidden_dims=_parse_ints(hidden), output_dim=1)
        pool = init_pool(spec, experts, seed)
        cfg = TrainConfig(
            epochs=epochs,
            batch_size=batch_size,
            lambda_div=lambda_div,
            tau=tau,
            seed=seed,
        )
        pool, log = train_experts(pool, (X, y), cfg)
        save_bundle(
            out,
            pool,
            stats,
            log,
            manifest={
                "expert_seed": seed,
                "expert_epochs": epochs,
                "lambda_div": lambda_div,
                "tau": tau,
                "batch_size": batch_size,
                "window": window,
                "train_subsample": train_subsample,
                "subsample_seed": subsample_seed,
                "data_fingerprint": dataset_fingerprint(data),
            },
        )
    except ClimoeError as exc:
        _fail(exc)
    click.echo(f"trained {experts} experts for {epochs} epochs -> {out}")


@main.command("train-router")
@click.option("--data", envvar="CLIMOE_DATA", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--bundle", required=True, type=click.Path(), help="Bundle from train-experts.")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--epochs", default=300, show_default=True, type=int)
@click.option("--batch-size", default=512, show_default=True, type=int)
@click.option("--hidden", default="64", show_default=True, help="Router hidden layer sizes.")
def train_router_cmd(data, bundle, seed, epochs, batch_size, hidden):
    """Train the softmax router over the frozen expert pool."""
    from climoe.bundle import attach_router, dataset_fingerprint, load_bundle
    from climoe.moe import TrainConfig, init_router, train_router

    try:
        b = load_bundle(bundle)
        fp = dataset_fingerprint(data)
        if b.manifest.get("data_fingerprint") not in (None, fp):
            raise ClimoeError(
                f"dataset fingerprint mismatch: bundle was trained on different data ({data})"
            )
        _, _, X, y = _load_training_arrays(
            data,
            int(b.manifest.get("window", 6)),
            b.manifest.get("train_subsample"),
            int(b.manifest.get("subsample_seed", 0)),
        )
        router = init_router(b.pool.spec.input_dim, b.pool.n_experts, _parse_ints(hidden), seed)
        cfg = TrainConfig(epochs=epochs, batch_size=batch_size, seed=seed)
        router, log = train_router(router, b.pool, (X, y), cfg)
        attach_router(bundle, router, log, {"router_seed": seed, "router_epochs": epochs})
    except ClimoeError as exc:
        _fail(exc)
    click.echo(f"trained router for {epochs} epochs -> {bundle}")


@main.command("eval")
@click.option("--data", envvar="CLIMOE_DATA", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--out", default=None, type=click.Path(), help="Where to write report.json.")
@click.option("--variants", default="adaptive,no_pretraining,no_specialization,mlp_baseline", show_default=True)
@click.option("--seeds", default="1,2,3,4,5", show_default=True)
@click.option("--expert-epochs", default=640, show_default=True, type=int)
@click.option("--router-epochs", default=300, show_default=True, type=int)
@click.option("--joint-epochs", default=15, show_default=True, type=int)
@click.option("--baseline-epochs", default=15, show_default=True, type=int)
@click.option("--lambda", "lambda_div", default=0.01, show_default=True, type=float)
@click.option("--batch-size", default=512, show_default=True, type=int)
@click.option("--train-subsample", default=8000, show_default=True, type=int)
@click.option("--test-subsample", default=30000, show_default=True, type=int)
def eval_cmd(data, out, variants, seeds, expert_epochs, router_epochs, joint_epochs, baseline_epochs, lambda_div, batch_size, train_subsample, test_subsample):
    """Run the multi-seed comparison harness and print the metrics table."""
    from climoe.evaluation import ExperimentConfig, render_report, run_experiment, save_report
    from climoe.moe import VariantConfig

    try:
        cfg = ExperimentConfig(
            model=VariantConfig(
                expert_epochs=expert_epochs,
                router_epochs=router_epochs,
                joint_epochs=joint_epochs,
                baseline_epochs=baseline_epochs,
                lambda_div=lambda_div,
                batch_size=batch_size,
            ),
            train_subsample=train_subsample,
            test_subsample=test_subsample,
        )
        report = run_experiment(data, [v.strip() for v in variants.split(",") if v.strip()], list(_parse_ints(seeds)), cfg)
        if out:
            save_report(report, out)
    except ClimoeError as exc:
        _fail(exc)
    click.echo(render_report(report), nl=False)
    if out:
        click.echo(f"wrote {out}")


@main.command()
@click.option("--data", envvar="CLIMOE_DATA", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--port", default=8080, show_default=True, type=int)
@click.option("--static", "static_dir", default=None, type=click.Path(exists=True, file_okay=False))
@click.option("--host", default="127.0.0.1", show_default=True)
def serve(data, port, static_dir, host):
    """Serve the read-only dataset API (and optionally the web UI)."""
    from climoe.service import serve as run_server

    try:
        run_server(data, port=port, static_dir=static_dir, host=host)
    except ClimoeError as exc:
        _fail(exc)


if __name__ == "__main__":
    main()
