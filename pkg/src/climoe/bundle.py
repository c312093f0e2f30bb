"""Model bundle directory: expert pool, router, stats, logs, manifest."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from climoe.data.scaling import NormStats, load_norm_stats, save_norm_stats
from climoe.errors import SchemaError
from climoe.moe import ExpertPool, RouterModel, load_pool, save_pool
from climoe.nn.params_io import load_params, save_params

MANIFEST_NAME = "manifest.json"
LOG_NAME = "train_log.jsonl"
ROUTER_NAME = "router.bin"
STATS_NAME = "norm_stats.json"
POOL_DIR = "pool"


def dataset_fingerprint(data_dir: str | Path) -> str:
    """SHA-256 over every file of a dataset directory, path-ordered."""
    root = Path(data_dir)
    h = hashlib.sha256()
    for f in sorted(p for p in root.rglob("*") if p.is_file()):
        h.update(str(f.relative_to(root)).encode())
        h.update(b"\0")
        h.update(f.read_bytes())
    return h.hexdigest()


def _write_manifest(bundle_dir: Path, manifest: dict) -> None:
    (bundle_dir / MANIFEST_NAME).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _write_log(bundle_dir: Path, records: list[dict]) -> None:
    lines = [json.dumps(r, sort_keys=True) for r in records]
    (bundle_dir / LOG_NAME).write_text("\n".join(lines) + ("\n" if lines else ""))


def read_log(bundle_dir: str | Path) -> list[dict]:
    path = Path(bundle_dir) / LOG_NAME
    if not path.is_file():
        return []
    return [json.loads(line) for line in path.read_text().splitlines() if line.strip()]


def save_bundle(
    bundle_dir: str | Path,
    pool: ExpertPool,
    stats: NormStats,
    log_records: list[dict],
    manifest: dict,
    router: RouterModel | None = None,
) -> None:
    bdir = Path(bundle_dir)
    bdir.mkdir(parents=True, exist_ok=True)
    save_pool(pool, bdir / POOL_DIR)
    save_norm_stats(stats, bdir / STATS_NAME)
    base = {
        "format": "climoe-bundle",
        "version": 1,
        "n_experts": pool.n_experts,
        "expert_spec": pool.spec.descriptor(),
        "router_spec": router.spec.descriptor() if router else None,
    }
    base.update(manifest)
    _write_manifest(bdir, base)
    _write_log(bdir, log_records)
    if router is not None:
        save_params(bdir / ROUTER_NAME, router.spec, router.params)


def attach_router(
    bundle_dir: str | Path,
    router: RouterModel,
    log_records: list[dict],
    manifest_updates: dict | None = None,
) -> None:
    """Add or replace the router of an existing bundle, idempotently."""
    bdir = Path(bundle_dir)
    manifest = load_manifest(bdir)
    manifest["router_spec"] = router.spec.descriptor()
    manifest.update(manifest_updates or {})
    save_params(bdir / ROUTER_NAME, router.spec, router.params)
    kept = [r for r in read_log(bdir) if r.get("phase") != "router"]
    _write_log(bdir, kept + log_records)
    _write_manifest(bdir, manifest)


def load_manifest(bundle_dir: str | Path) -> dict:
    path = Path(bundle_dir) / MANIFEST_NAME
    if not path.is_file():
        raise SchemaError(f"{bundle_dir}: missing {MANIFEST_NAME}")
    return json.loads(path.read_text())


@dataclass
class Bundle:
    pool: ExpertPool  # fully frozen
    router: RouterModel | None
    stats: NormStats
    manifest: dict


def load_bundle(bundle_dir: str | Path) -> Bundle:
    bdir = Path(bundle_dir)
    pool_dir = bdir / POOL_DIR
    if not pool_dir.is_dir():
        raise SchemaError(f"{bdir}: expert pool not found")
    pool = load_pool(pool_dir)
    manifest = load_manifest(bdir)
    if manifest.get("n_experts") != pool.n_experts:
        raise SchemaError(
            f"{bdir}: manifest lists {manifest.get('n_experts')} experts, found {pool.n_experts}"
        )
    stats = load_norm_stats(bdir / STATS_NAME)
    router = None
    router_path = bdir / ROUTER_NAME
    if router_path.is_file():
        spec, params = load_params(router_path)
        router = RouterModel(spec=spec, params=params)
    return Bundle(pool=pool, router=router, stats=stats, manifest=manifest)
