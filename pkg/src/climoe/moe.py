"""Mixture-of-experts training: diversity-regularized expert pretraining,
router training over frozen experts, joint and ablation variants, inference,
and the model bundle on disk.

Expert pretraining follows a selective schedule: each epoch draws two
distinct experts, freezes the rest, and minimizes each drawn expert's MSE
plus a capped repulsive term -min(||P_i - P_j||_2, tau) on their parameter
distance. Router training consumes a fully frozen pool and fits a softmax
gate whose weighted sum of expert outputs minimizes batch MSE.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from climoe import rng
from climoe.data.windows import SampleSet
from climoe.errors import ConfigError, ContractError, NumericError, SchemaError
from climoe.nn.mlp import MlpSpec, ParamVector, backward, forward, forward_cached, init_params
from climoe.nn.multi import multi_backward, multi_forward_cached, stack_params
from climoe.nn.optim import OptimState, optimizer_step, step_array
from climoe.nn.params_io import load_params, save_params

DEFAULT_N_EXPERTS = 16

# Diversity cap. Fresh [64, 64] experts start ~17 apart in parameter L2, so
# the cap must sit above typical init distances or the repulsive term is
# inert from the first step.
DEFAULT_TAU = 25.0

VARIANTS = ("adaptive", "no_pretraining", "no_specialization", "mlp_baseline")

_EXPERT_INIT_TAG = 0xE0
_ROUTER_INIT_TAG = 0xB0
_PAIR_TAG = 0xAB
_SHUFFLE_TAG = 0x5F


@dataclass
class ExpertPool:
    """E identically shaped experts with per-expert freeze flags."""

    spec: MlpSpec
    params: list[ParamVector]
    frozen: np.ndarray

    def __post_init__(self):
        if len(self.params) != self.frozen.shape[0]:
            raise ConfigError("freeze flags must match the number of experts")
        want = self.spec.spec_hash()
        for p in self.params:
            if p.spec_hash != want:
                raise ConfigError("all experts must share one spec")

    @property
    def n_experts(self) -> int:
        return len(self.params)

    def hashes(self) -> list[str]:
        return [p.content_hash() for p in self.params]


@dataclass
class RouterModel:
    """Gating network; softmax over its outputs yields the expert weights."""

    spec: MlpSpec
    params: ParamVector


@dataclass(frozen=True)
class TrainConfig:
    """Knobs for one training phase."""

    epochs: int
    batch_size: int = 256
    lambda_div: float = 0.01
    tau: float = DEFAULT_TAU
    seed: int = 0
    learning_rate: float = 1e-3
    optimizer: str = "adam"

    def __post_init__(self):
        if self.lambda_div < 0:
            raise ConfigError("lambda_div must be non-negative")
        if self.tau <= 0:
            raise ConfigError("tau must be positive")
        if self.batch_size < 1:
            raise ConfigError("batch_size must be positive")


def expert_seed(seed: int, index: int) -> int:
    """Init seed of expert `index` in a pool created with `seed`."""
    return rng.mix_key(seed, _EXPERT_INIT_TAG, index)


def init_pool(spec: MlpSpec, n_experts: int = DEFAULT_N_EXPERTS, seed: int = 0) -> ExpertPool:
    if n_experts < 2:
        raise ConfigError("a pool needs at least two experts")
    params = [init_params(spec, expert_seed(seed, k)) for k in range(n_experts)]
    return ExpertPool(spec=spec, params=params, frozen=np.zeros(n_experts, dtype=bool))


def init_router(input_dim: int, n_experts: int, hidden: tuple[int, ...] = (64,), seed: int = 0) -> RouterModel:
    spec = MlpSpec(input_dim=input_dim, hidden_dims=tuple(hidden), output_dim=n_experts)
    return RouterModel(spec=spec, params=init_params(spec, rng.mix_key(seed, _ROUTER_INIT_TAG)))


def freeze_all(pool: ExpertPool) -> ExpertPool:
    pool.frozen[:] = True
    return pool


# ---------------------------------------------------------------------------
# Losses and gating math


def diversity_loss(pool: ExpertPool, i: int, j: int, tau: float) -> float:
    """-min(||P_i - P_j||_2, tau) over flattened parameter vectors."""
    if i == j:
        raise ConfigError("diversity pair must be two distinct experts")
    if tau <= 0:
        raise ConfigError("tau must be positive")
    dist = float(np.linalg.norm(pool.params[i].values - pool.params[j].values))
    return -min(dist, tau)


def _diversity_grads(pool: ExpertPool, i: int, j: int, tau: float) -> tuple[np.ndarray, np.ndarray, float]:
    """Gradients of diversity_loss w.r.t. P_i and P_j (0 at/beyond the cap)."""
    d = pool.params[i].values - pool.params[j].values
    dist = float(np.linalg.norm(d))
    if dist >= tau or dist == 0.0:
        z = np.zeros_like(d)
        return z, z, -min(dist, tau)
    unit = d / dist
    return -unit, unit, -dist


def softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def route(router: RouterModel, x: np.ndarray) -> np.ndarray:
    """Gate weights on the expert simplex for one input or a batch."""
    return softmax(forward(router.spec, router.params, x))


def combine(weights: np.ndarray, expert_outputs: np.ndarray) -> np.ndarray:
    """Weighted sum over the expert axis (the final prediction)."""
    w = np.asarray(weights, dtype=np.float64)
    e = np.asarray(expert_outputs, dtype=np.float64)
    if w.shape != e.shape:
        raise ConfigError(f"weights shape {w.shape} != expert outputs shape {e.shape}")
    return (w * e).sum(axis=-1)


def expert_outputs(pool: ExpertPool, x: np.ndarray) -> np.ndarray:
    """Scalar expert predictions: shape (E,) for one input, (n, E) for a batch."""
    cols = [forward(pool.spec, p, x)[..., 0] for p in pool.params]
    return np.stack(cols, axis=-1)


def predict(router: RouterModel, pool: ExpertPool, x: np.ndarray) -> float | np.ndarray:
    """Router-weighted sum of expert predictions; pure."""
    w = route(router, x)
    e = expert_outputs(pool, x)
    y = combine(w, e)
    return float(y) if np.ndim(y) == 0 else y


# ---------------------------------------------------------------------------
# Training loops


def _train_arrays(data) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(data, SampleSet):
        return data.inputs("train"), data.targets("train")
    X, y = data
    return np.asarray(X, dtype=np.float64), np.asarray(y, dtype=np.float64)


def epoch_batches(n: int, batch_size: int, seed: int, epoch: int):
    """Deterministic per-epoch shuffle, chunked into mini-batches."""
    order = rng.permutation(rng.mix_key(seed, _SHUFFLE_TAG, epoch), n)
    for s in range(0, n, batch_size):
        yield order[s : s + batch_size]


def _mse_and_upstream(pred: np.ndarray, y: np.ndarray) -> tuple[float, np.ndarray]:
    err = pred[:, 0] - y
    loss = float(np.mean(err * err))
    if not np.isfinite(loss):
        raise NumericError("non-finite training loss; aborting epoch")
    return loss, (2.0 / err.size) * err[:, None]


class _PairedAdam:
    """Per-expert adam state usable on a stacked pair of parameter rows.

    Each expert keeps its own moment buffers and step counter (experts are
    selected unevenly across epochs, so bias correction differs per row).
    Coordinate-wise math makes this exactly equivalent to one OptimState
    per expert.
    """

    def __init__(self, n_experts: int, n_params: int, cfg: TrainConfig):
        self.lr = cfg.learning_rate
        self.kind = cfg.optimizer
        self.beta1, self.beta2, self.eps = 0.9, 0.999, 1e-8
        self.m = np.zeros((n_experts, n_params))
        self.v = np.zeros((n_experts, n_params))
        self.t = np.zeros(n_experts, dtype=np.int64)

    def step_pair(self, idx: tuple[int, int], values: np.ndarray, grads: np.ndarray) -> None:
        """Update rows `idx` of a (2, n_params) stacked value array in place."""
        if not np.all(np.isfinite(grads)):
            raise NumericError("non-finite gradient; step aborted")
        rows = list(idx)
        if self.kind == "sgd":
            values -= self.lr * grads
            self.t[rows] += 1
            return
        self.t[rows] += 1
        t = self.t[rows][:, None].astype(np.float64)
        m = self.m[rows] = self.beta1 * self.m[rows] + (1.0 - self.beta1) * grads
        v = self.v[rows] = self.beta2 * self.v[rows] + (1.0 - self.beta2) * grads * grads
        m_hat = m / (1.0 - self.beta1**t)
        v_hat = v / (1.0 - self.beta2**t)
        values -= self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


def train_experts(pool: ExpertPool, data, cfg: TrainConfig) -> tuple[ExpertPool, list[dict]]:
    """Selective two-expert training with the capped diversity term."""
    if cfg.epochs < 1:
        raise ConfigError("epochs must be at least 1")
    X, y = _train_arrays(data)
    if X.shape[0] == 0:
        raise ConfigError("train partition is empty")
    opt = _PairedAdam(pool.n_experts, pool.spec.n_params, cfg)
    log: list[dict] = []
    for epoch in range(cfg.epochs):
        i, j = rng.choose_pair(rng.mix_key(cfg.seed, _PAIR_TAG, epoch), pool.n_experts)
        pool.frozen[:] = True
        pool.frozen[i] = False
        pool.frozen[j] = False
        pair = stack_params([pool.params[i].values, pool.params[j].values])
        sums = np.zeros(3)
        n_batches = 0
        for batch in epoch_batches(X.shape[0], cfg.batch_size, cfg.seed, epoch):
            xb, yb = X[batch], y[batch]
            out, acts, pres = multi_forward_cached(pool.spec, pair, xb)
            err = out[:, :, 0] - yb[None, :]
            losses = (err * err).mean(axis=1)
            if not np.all(np.isfinite(losses)):
                raise NumericError("non-finite training loss; aborting epoch")
            upstream = (2.0 / err.shape[1]) * err[:, :, None]
            grad = multi_backward(pool.spec, pair, xb, upstream, (acts, pres))
            d = pair[0] - pair[1]
            dist = float(np.linalg.norm(d))
            ldiv = -min(dist, cfg.tau)
            if cfg.lambda_div > 0.0 and 0.0 < dist < cfg.tau:
                unit = d / dist
                grad[0] -= cfg.lambda_div * unit
                grad[1] += cfg.lambda_div * unit
            opt.step_pair((i, j), pair, grad)
            sums[0] += losses[0]
            sums[1] += losses[1]
            sums[2] += ldiv
            n_batches += 1
        pool.params[i].values[...] = pair[0]
        pool.params[j].values[...] = pair[1]
        log.append(
            {
                "phase": "experts",
                "epoch": epoch,
                "expert_i": i,
                "expert_j": j,
                "loss_i": float(sums[0] / n_batches),
                "loss_j": float(sums[1] / n_batches),
                "loss_div": float(sums[2] / n_batches),
            }
        )
    pool.frozen[:] = False
    return pool, log


def train_all_experts(pool: ExpertPool, data, cfg: TrainConfig) -> tuple[ExpertPool, list[dict]]:
    """Ablation: every expert updated on every batch, no diversity term.

    All experts step together, so they train as one stacked tensor; adam is
    coordinate-wise, which makes this identical to per-expert optimizers.
    """
    if cfg.epochs < 1:
        raise ConfigError("epochs must be at least 1")
    X, y = _train_arrays(data)
    stacked = stack_params([p.values for p in pool.params])
    state = OptimState(learning_rate=cfg.learning_rate, kind=cfg.optimizer)
    pool.frozen[:] = False
    log: list[dict] = []
    for epoch in range(cfg.epochs):
        loss_sum = 0.0
        n_batches = 0
        for batch in epoch_batches(X.shape[0], cfg.batch_size, cfg.seed, epoch):
            xb, yb = X[batch], y[batch]
            out, acts, pres = multi_forward_cached(pool.spec, stacked, xb)
            err = out[:, :, 0] - yb[None, :]
            loss = float(np.mean(err * err))
            if not np.isfinite(loss):
                raise NumericError("non-finite training loss; aborting epoch")
            upstream = (2.0 / err.shape[1]) * err[:, :, None]
            grad = multi_backward(pool.spec, stacked, xb, upstream, (acts, pres))
            step_array(state, stacked, grad)
            loss_sum += loss
            n_batches += 1
        log.append(
            {
                "phase": "experts",
                "epoch": epoch,
                "experts": "all",
                "loss_mean": float(loss_sum / n_batches),
                "loss_div": 0.0,
            }
        )
    for k, p in enumerate(pool.params):
        p.values[...] = stacked[k]
    return pool, log


def _gate_upstream(w: np.ndarray, e: np.ndarray, yhat: np.ndarray, dl_dyhat: np.ndarray) -> np.ndarray:
    """d loss / d logits for the softmax-weighted combination."""
    return dl_dyhat[:, None] * w * (e - yhat[:, None])


def train_router(router: RouterModel, pool: ExpertPool, data, cfg: TrainConfig) -> tuple[RouterModel, list[dict]]:
    """Fit the gate over a frozen pool; expert parameters never move."""
    if cfg.epochs < 1:
        raise ConfigError("epochs must be at least 1")
    if not bool(pool.frozen.all()):
        raise ContractError("router training requires a fully frozen expert pool")
    if router.spec.output_dim != pool.n_experts:
        raise ConfigError("router output dimension must equal the number of experts")
    X, y = _train_arrays(data)
    pre_hashes = pool.hashes()

    # Frozen experts make their outputs constants of the data; compute once.
    e_all = expert_outputs(pool, X)

    state = OptimState(learning_rate=cfg.learning_rate, kind=cfg.optimizer)
    log: list[dict] = []
    for epoch in range(cfg.epochs):
        loss_sum = 0.0
        n_batches = 0
        for batch in epoch_batches(X.shape[0], cfg.batch_size, cfg.seed, epoch):
            xb, yb, eb = X[batch], y[batch], e_all[batch]
            logits, acts, pres = forward_cached(router.spec, router.params, xb)
            w = softmax(logits)
            yhat = combine(w, eb)
            err = yhat - yb
            loss = float(np.mean(err * err))
            if not np.isfinite(loss):
                raise NumericError("non-finite router loss; aborting epoch")
            upstream = _gate_upstream(w, eb, yhat, (2.0 / err.size) * err)
            grad, _ = backward(router.spec, router.params, xb, upstream, cache=(acts, pres))
            optimizer_step(state, router.params, grad)
            loss_sum += loss
            n_batches += 1
        log.append({"phase": "router", "epoch": epoch, "loss": loss_sum / n_batches})
    if pool.hashes() != pre_hashes:
        raise ContractError("expert parameters changed during router training")
    return router, log


def train_joint(pool: ExpertPool, router: RouterModel, data, cfg: TrainConfig) -> tuple[ExpertPool, RouterModel, list[dict]]:
    """End-to-end gate + experts on the combined MSE (no pretraining phase)."""
    if cfg.epochs < 1:
        raise ConfigError("epochs must be at least 1")
    X, y = _train_arrays(data)
    pool.frozen[:] = False
    stacked = stack_params([p.values for p in pool.params])
    estate = OptimState(learning_rate=cfg.learning_rate, kind=cfg.optimizer)
    rstate = OptimState(learning_rate=cfg.learning_rate, kind=cfg.optimizer)
    log: list[dict] = []
    for epoch in range(cfg.epochs):
        loss_sum = 0.0
        n_batches = 0
        for batch in epoch_batches(X.shape[0], cfg.batch_size, cfg.seed, epoch):
            xb, yb = X[batch], y[batch]
            eout, eacts, epres = multi_forward_cached(pool.spec, stacked, xb)
            outs = eout[:, :, 0].T  # (B, E)
            logits, racts, rpres = forward_cached(router.spec, router.params, xb)
            w = softmax(logits)
            yhat = combine(w, outs)
            err = yhat - yb
            loss = float(np.mean(err * err))
            if not np.isfinite(loss):
                raise NumericError("non-finite joint loss; aborting epoch")
            dl_dyhat = (2.0 / err.size) * err
            rgrad, _ = backward(
                router.spec,
                router.params,
                xb,
                _gate_upstream(w, outs, yhat, dl_dyhat),
                cache=(racts, rpres),
            )
            eupstream = (dl_dyhat[:, None] * w).T[:, :, None]  # (E, B, 1)
            egrad = multi_backward(pool.spec, stacked, xb, eupstream, (eacts, epres))
            step_array(estate, stacked, egrad)
            optimizer_step(rstate, router.params, rgrad)
            loss_sum += loss
            n_batches += 1
        log.append({"phase": "joint", "epoch": epoch, "loss": loss_sum / n_batches})
    for k, p in enumerate(pool.params):
        p.values[...] = stacked[k]
    return pool, router, log


def train_single_mlp(spec: MlpSpec, params: ParamVector, data, cfg: TrainConfig) -> tuple[ParamVector, list[dict]]:
    """Plain MSE training of one network (the baseline path)."""
    if cfg.epochs < 1:
        raise ConfigError("epochs must be at least 1")
    X, y = _train_arrays(data)
    state = OptimState(learning_rate=cfg.learning_rate, kind=cfg.optimizer)
    log: list[dict] = []
    for epoch in range(cfg.epochs):
        loss_sum = 0.0
        n_batches = 0
        for batch in epoch_batches(X.shape[0], cfg.batch_size, cfg.seed, epoch):
            xb, yb = X[batch], y[batch]
            pred, acts, pres = forward_cached(spec, params, xb)
            loss, upstream = _mse_and_upstream(pred, yb)
            grad, _ = backward(spec, params, xb, upstream, cache=(acts, pres))
            optimizer_step(state, params, grad)
            loss_sum += loss
            n_batches += 1
        log.append({"phase": "mlp", "epoch": epoch, "loss": loss_sum / n_batches})
    return params, log


def mean_pairwise_distance(pool: ExpertPool) -> float:
    """Mean L2 distance between all distinct expert parameter pairs."""
    total = 0.0
    count = 0
    for a in range(pool.n_experts):
        for b in range(a + 1, pool.n_experts):
            total += float(np.linalg.norm(pool.params[a].values - pool.params[b].values))
            count += 1
    return total / count


# ---------------------------------------------------------------------------
# Variants


@dataclass(frozen=True)
class VariantConfig:
    """Shared configuration for the comparison variants."""

    n_experts: int = DEFAULT_N_EXPERTS
    expert_hidden: tuple[int, ...] = (64, 64)
    router_hidden: tuple[int, ...] = (64,)
    baseline_hidden: tuple[int, ...] = (64, 64, 64)
    expert_epochs: int = 640
    all_expert_epochs: int | None = None  # None: match per-expert update budget
    router_epochs: int = 300
    joint_epochs: int = 15
    baseline_epochs: int = 15
    batch_size: int = 512
    lambda_div: float = 0.01
    tau: float = DEFAULT_TAU
    learning_rate: float = 1e-3
    optimizer: str = "adam"
    seed: int = 0

    def resolved_all_expert_epochs(self) -> int:
        """Full-pool epochs giving each expert the same number of updates as
        the selective schedule (which touches 2 of n_experts per epoch)."""
        if self.all_expert_epochs is not None:
            return self.all_expert_epochs
        return max(1, (2 * self.expert_epochs) // self.n_experts)

    def phase(self, epochs: int, lambda_div: float | None = None) -> TrainConfig:
        return TrainConfig(
            epochs=epochs,
            batch_size=self.batch_size,
            lambda_div=self.lambda_div if lambda_div is None else lambda_div,
            tau=self.tau,
            seed=self.seed,
            learning_rate=self.learning_rate,
            optimizer=self.optimizer,
        )


class MoePredictor:
    """Trained pool + router pair exposed as a plain predict callable."""

    def __init__(self, pool: ExpertPool, router: RouterModel):
        self.pool = pool
        self.router = router

    def predict(self, x: np.ndarray):
        return predict(self.router, self.pool, x)


class MlpPredictor:
    def __init__(self, spec: MlpSpec, params: ParamVector):
        self.spec = spec
        self.params = params

    def predict(self, x: np.ndarray):
        out = forward(self.spec, self.params, x)
        return float(out[0]) if out.ndim == 1 else out[:, 0]


def _input_dim(data) -> int:
    if isinstance(data, SampleSet):
        return data.input_dim
    return np.asarray(data[0]).shape[1]


def train_variant(kind: str, data, cfg: VariantConfig):
    """Train one comparison variant; returns (predictor, log records)."""
    if kind not in VARIANTS:
        raise ConfigError(f"unknown variant {kind!r}; expected one of {VARIANTS}")
    d = _input_dim(data)
    if kind == "mlp_baseline":
        spec = MlpSpec(input_dim=d, hidden_dims=tuple(cfg.baseline_hidden), output_dim=1)
        params = init_params(spec, rng.mix_key(cfg.seed, _EXPERT_INIT_TAG))
        params, log = train_single_mlp(spec, params, data, cfg.phase(cfg.baseline_epochs))
        return MlpPredictor(spec, params), log

    spec = MlpSpec(input_dim=d, hidden_dims=tuple(cfg.expert_hidden), output_dim=1)
    pool = init_pool(spec, cfg.n_experts, cfg.seed)
    router = init_router(d, cfg.n_experts, cfg.router_hidden, cfg.seed)

    if kind == "no_pretraining":
        pool, router, log = train_joint(pool, router, data, cfg.phase(cfg.joint_epochs))
        return MoePredictor(pool, router), log

    if kind == "adaptive":
        pool, log1 = train_experts(pool, data, cfg.phase(cfg.expert_epochs))
    else:  # no_specialization: no pair selection, no diversity term
        pool, log1 = train_all_experts(
            pool, data, cfg.phase(cfg.resolved_all_expert_epochs(), lambda_div=0.0)
        )
    freeze_all(pool)
    router, log2 = train_router(router, pool, data, cfg.phase(cfg.router_epochs))
    return MoePredictor(pool, router), log1 + log2


# ---------------------------------------------------------------------------
# Bundle I/O


def save_pool(pool: ExpertPool, pool_dir: str | Path) -> None:
    """One CLMO file per expert: pool/expert_{00..E-1}.bin."""
    pdir = Path(pool_dir)
    pdir.mkdir(parents=True, exist_ok=True)
    for k, p in enumerate(pool.params):
        save_params(pdir / f"expert_{k:02d}.bin", pool.spec, p)


def load_pool(pool_dir: str | Path, expected_spec: MlpSpec | None = None) -> ExpertPool:
    """Load every expert file; the returned pool is fully frozen."""
    pdir = Path(pool_dir)
    files = sorted(pdir.glob("expert_*.bin"))
    if not files:
        raise SchemaError(f"{pdir}: expert pool not found")
    spec = None
    params = []
    for f in files:
        s, p = load_params(f, expected_spec)
        if spec is None:
            spec = s
        elif s != spec:
            raise SchemaError(f"{f.name}: expert spec differs from the rest of the pool")
        params.append(p)
    pool = ExpertPool(spec=spec, params=params, frozen=np.ones(len(params), dtype=bool))
    return pool
