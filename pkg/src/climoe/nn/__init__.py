from climoe.nn.mlp import MlpSpec, ParamVector, backward, forward, init_params
from climoe.nn.optim import OptimState, optimizer_step
from climoe.nn.params_io import load_params, save_params

__all__ = [
    "MlpSpec",
    "ParamVector",
    "OptimState",
    "init_params",
    "forward",
    "backward",
    "optimizer_step",
    "save_params",
    "load_params",
]
