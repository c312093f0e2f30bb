"""First-order optimizers over flat parameter vectors."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from climoe.errors import ConfigError, NumericError, ShapeError
from climoe.nn.mlp import ParamVector

OPTIMIZERS = ("sgd", "adam")


@dataclass
class OptimState:
    """Learning rate, optimizer kind, and adam moment buffers."""

    learning_rate: float = 1e-3
    kind: str = "adam"
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step: int = 0
    m: np.ndarray | None = field(default=None, repr=False)
    v: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in OPTIMIZERS:
            raise ConfigError(f"unknown optimizer {self.kind!r}")
        if self.learning_rate <= 0:
            raise ConfigError("learning_rate must be positive")


def step_array(state: OptimState, values: np.ndarray, grads: np.ndarray) -> None:
    """One update in place on a bare array; raises NumericError on non-finite
    gradients. The step counter and moment buffers advance only when the
    update is applied, so an aborted step leaves values and state untouched.
    """
    g = np.asarray(grads, dtype=np.float64)
    if g.shape != values.shape:
        raise ShapeError(f"gradient shape {g.shape} != parameter shape {values.shape}")
    if not np.all(np.isfinite(g)):
        raise NumericError("non-finite gradient; step aborted")

    if state.kind == "sgd":
        values -= state.learning_rate * g
        state.step += 1
        return

    if state.m is None:
        state.m = np.zeros_like(values)
        state.v = np.zeros_like(values)
    if state.m.shape != values.shape:
        raise ShapeError("moment buffers do not match the parameter vector")
    state.step += 1
    state.m = state.beta1 * state.m + (1.0 - state.beta1) * g
    state.v = state.beta2 * state.v + (1.0 - state.beta2) * g * g
    m_hat = state.m / (1.0 - state.beta1**state.step)
    v_hat = state.v / (1.0 - state.beta2**state.step)
    values -= state.learning_rate * m_hat / (np.sqrt(v_hat) + state.eps)


def optimizer_step(state: OptimState, params: ParamVector, grads: np.ndarray) -> ParamVector:
    """One update of a parameter vector in place."""
    step_array(state, params.values, grads)
    return params
