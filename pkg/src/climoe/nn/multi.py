"""Batched forward/backward over a stack of identically shaped networks.

One (E, n_params) tensor holds every network; layer matmuls broadcast over
the network axis, so updating all E experts per batch costs one fused einsum
chain instead of E separate passes. Math is identical to the per-network
path up to float summation order.
"""

from __future__ import annotations

import numpy as np

from climoe.nn.mlp import MlpSpec


def stack_params(vectors: list[np.ndarray]) -> np.ndarray:
    return np.stack(vectors, axis=0)


def _layer_views(spec: MlpSpec, stacked: np.ndarray):
    """(W (E, din, dout), b (E, dout)) views per layer."""
    E = stacked.shape[0]
    views = []
    off = 0
    for din, dout in spec.layer_dims:
        w = stacked[:, off : off + din * dout].reshape(E, din, dout)
        off += din * dout
        b = stacked[:, off : off + dout]
        off += dout
        views.append((w, b))
    return views


def multi_forward_cached(spec: MlpSpec, stacked: np.ndarray, X: np.ndarray):
    """Outputs (E, B, dout) plus per-layer activations and pre-activations."""
    acts = []
    pres = []
    a = None
    B = X.shape[0]
    for l, ((w, b), name) in enumerate(zip(_layer_views(spec, stacked), spec.activations)):
        if l == 0:
            # One wide GEMM: X (B, din) @ W-all (din, E*dout), then split per net.
            E, din, dout = w.shape
            wall = w.transpose(1, 0, 2).reshape(din, E * dout)
            z = (X @ wall).reshape(B, E, dout).transpose(1, 0, 2) + b[:, None, :]
        else:
            z = np.matmul(a, w) + b[:, None, :]
        pres.append(z)
        a = np.maximum(z, 0.0) if name == "relu" else z
        acts.append(a)
    return a, acts, pres


def multi_backward(
    spec: MlpSpec,
    stacked: np.ndarray,
    X: np.ndarray,
    upstream: np.ndarray,
    cache,
) -> np.ndarray:
    """Per-network parameter gradients, shape (E, n_params)."""
    acts, pres = cache
    E = stacked.shape[0]
    views = _layer_views(spec, stacked)
    grad = np.zeros_like(stacked)
    gviews = _layer_views(spec, grad)
    delta = upstream
    for l in range(len(views) - 1, -1, -1):
        if spec.activations[l] == "relu":
            delta = delta * (pres[l] > 0.0)
        gw, gb = gviews[l]
        if l == 0:
            E, din, dout = views[0][0].shape
            dall = delta.transpose(1, 0, 2).reshape(X.shape[0], E * dout)
            gw[...] = (X.T @ dall).reshape(din, E, dout).transpose(1, 0, 2)
        else:
            gw[...] = np.matmul(acts[l - 1].transpose(0, 2, 1), delta)
        gb[...] = delta.sum(axis=1)
        if l > 0:
            delta = np.matmul(delta, views[l][0].transpose(0, 2, 1))
    return grad
