"""Dense multilayer perceptrons with hand-derived gradients.

Parameters live in one flat float64 vector per network, laid out layer by
layer as the row-major weight matrix followed by the bias vector. Everything
downstream (experts, router, baseline, serialization) shares this layout.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from climoe import rng
from climoe.errors import ShapeError

ACTIVATIONS = ("relu", "identity")

_INIT_TAG = 0x11A7


@dataclass(frozen=True)
class MlpSpec:
    """Shape of a dense network: layer sizes plus per-layer activation."""

    input_dim: int
    hidden_dims: tuple[int, ...]
    output_dim: int
    activations: tuple[str, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "hidden_dims", tuple(int(d) for d in self.hidden_dims))
        dims = (self.input_dim, *self.hidden_dims, self.output_dim)
        if any(int(d) <= 0 for d in dims):
            raise ShapeError(f"layer dimensions must be positive, got {dims}")
        if not self.activations:
            acts = ("relu",) * len(self.hidden_dims) + ("identity",)
            object.__setattr__(self, "activations", acts)
        if len(self.activations) != len(self.hidden_dims) + 1:
            raise ShapeError(
                f"need {len(self.hidden_dims) + 1} activations, got {len(self.activations)}"
            )
        for a in self.activations:
            if a not in ACTIVATIONS:
                raise ShapeError(f"unknown activation {a!r}")

    @property
    def layer_dims(self) -> list[tuple[int, int]]:
        dims = (self.input_dim, *self.hidden_dims, self.output_dim)
        return [(dims[i], dims[i + 1]) for i in range(len(dims) - 1)]

    @property
    def n_params(self) -> int:
        return sum(din * dout + dout for din, dout in self.layer_dims)

    def descriptor(self) -> dict:
        return {
            "input_dim": self.input_dim,
            "hidden_dims": list(self.hidden_dims),
            "output_dim": self.output_dim,
            "activations": list(self.activations),
        }

    def spec_hash(self) -> str:
        blob = json.dumps(self.descriptor(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    @classmethod
    def from_descriptor(cls, desc: dict) -> "MlpSpec":
        return cls(
            input_dim=int(desc["input_dim"]),
            hidden_dims=tuple(int(d) for d in desc["hidden_dims"]),
            output_dim=int(desc["output_dim"]),
            activations=tuple(desc.get("activations") or ()),
        )


@dataclass
class ParamVector:
    """Flat parameter vector tied to its owning MlpSpec by hash."""

    values: np.ndarray
    spec_hash: str

    def copy(self) -> "ParamVector":
        return ParamVector(self.values.copy(), self.spec_hash)

    def content_hash(self) -> str:
        return hashlib.sha256(np.ascontiguousarray(self.values).tobytes()).hexdigest()


def _check_params(spec: MlpSpec, params: ParamVector) -> np.ndarray:
    v = params.values
    if params.spec_hash != spec.spec_hash():
        raise ShapeError("parameter vector belongs to a different spec")
    if v.shape != (spec.n_params,):
        raise ShapeError(f"expected {spec.n_params} parameters, got {v.shape}")
    return v


def _unpack(spec: MlpSpec, values: np.ndarray) -> list[tuple[np.ndarray, np.ndarray]]:
    """Zero-copy (W, b) views in canonical order."""
    layers = []
    off = 0
    for din, dout in spec.layer_dims:
        w = values[off : off + din * dout].reshape(din, dout)
        off += din * dout
        b = values[off : off + dout]
        off += dout
        layers.append((w, b))
    return layers


def init_params(spec: MlpSpec, seed: int) -> ParamVector:
    """Uniform fan-in/fan-out scaled weights, zero biases; deterministic."""
    values = np.zeros(spec.n_params)
    for idx, ((din, dout), (w, b)) in enumerate(zip(spec.layer_dims, _unpack(spec, values))):
        limit = np.sqrt(6.0 / (din + dout))
        key = rng.mix_key(seed, _INIT_TAG, idx)
        w[...] = (rng.uniforms(key, din * dout) * 2.0 - 1.0).reshape(din, dout) * limit
        b[...] = 0.0
    return ParamVector(values, spec.spec_hash())


def _as_batch(spec: MlpSpec, x: np.ndarray) -> tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        if x.shape[0] != spec.input_dim:
            raise ShapeError(f"input length {x.shape[0]} != input_dim {spec.input_dim}")
        return x[None, :], True
    if x.ndim == 2:
        if x.shape[1] != spec.input_dim:
            raise ShapeError(f"input width {x.shape[1]} != input_dim {spec.input_dim}")
        return x, False
    raise ShapeError(f"input must be a vector or matrix, got ndim={x.ndim}")


def _apply_act(name: str, z: np.ndarray) -> np.ndarray:
    return np.maximum(z, 0.0) if name == "relu" else z


def forward_cached(
    spec: MlpSpec, params: ParamVector, x: np.ndarray
) -> tuple[np.ndarray, list[np.ndarray], list[np.ndarray]]:
    """Batch forward keeping per-layer inputs and pre-activations."""
    values = _check_params(spec, params)
    xb, _ = _as_batch(spec, x)
    acts = [xb]
    pres = []
    a = xb
    for (w, b), name in zip(_unpack(spec, values), spec.activations):
        z = a @ w + b
        pres.append(z)
        a = _apply_act(name, z)
        acts.append(a)
    return a, acts, pres


def forward(spec: MlpSpec, params: ParamVector, x: np.ndarray) -> np.ndarray:
    """Network output; pure in (params, x)."""
    values = _check_params(spec, params)
    xb, squeeze = _as_batch(spec, x)
    a = xb
    for (w, b), name in zip(_unpack(spec, values), spec.activations):
        a = _apply_act(name, a @ w + b)
    return a[0] if squeeze else a


def backward(
    spec: MlpSpec,
    params: ParamVector,
    x: np.ndarray,
    upstream_grad: np.ndarray,
    cache: tuple[list[np.ndarray], list[np.ndarray]] | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Exact gradients of sum(output * upstream_grad) w.r.t. params and input.

    For a batch, the parameter gradient accumulates over rows and the input
    gradient is returned row per row.
    """
    values = _check_params(spec, params)
    xb, squeeze = _as_batch(spec, x)
    g = np.asarray(upstream_grad, dtype=np.float64)
    if squeeze:
        if g.shape != (spec.output_dim,):
            raise ShapeError(f"upstream_grad must have length {spec.output_dim}")
        g = g[None, :]
    elif g.shape != (xb.shape[0], spec.output_dim):
        raise ShapeError(
            f"upstream_grad shape {g.shape} != {(xb.shape[0], spec.output_dim)}"
        )

    if cache is None:
        _, acts, pres = forward_cached(spec, params, xb)
    else:
        acts, pres = cache

    layers = _unpack(spec, values)
    grad = np.zeros_like(values)
    gviews = _unpack(spec, grad)
    delta = g
    for l in range(len(layers) - 1, -1, -1):
        if spec.activations[l] == "relu":
            delta = delta * (pres[l] > 0.0)
        gw, gb = gviews[l]
        gw[...] = acts[l].T @ delta
        gb[...] = delta.sum(axis=0)
        delta = delta @ layers[l][0].T
    input_grad = delta[0] if squeeze else delta
    return grad, input_grad
