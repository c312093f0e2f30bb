import numpy as np
import pytest

from climoe.data.grid import GridSpec
from climoe.synth import StormConfig, generate


@pytest.fixture(scope="session")
def small_series():
    """5x5 grid, 48 hours; enough structure for data-plumbing tests."""
    return generate(StormConfig(seed=7, days=2, radius_km=8.0), GridSpec(rows=5, cols=5))


@pytest.fixture(scope="session")
def small_dataset_dir(tmp_path_factory, small_series):
    from climoe.data.series import save_series

    out = tmp_path_factory.mktemp("data") / "small"
    save_series(small_series, out)
    return out


@pytest.fixture(scope="session")
def series_216():
    """4x4 grid over the full 9-day span (216 hourly frames)."""
    return generate(StormConfig(seed=11, days=9, radius_km=8.0), GridSpec(rows=4, cols=4))


def finite_difference_param_grad(spec, params, x, upstream, h=1e-5):
    """Independent central-difference oracle for backward()."""
    from climoe.nn.mlp import forward

    grad = np.zeros_like(params.values)
    for k in range(params.values.size):
        p_plus = params.copy()
        p_plus.values[k] += h
        p_minus = params.copy()
        p_minus.values[k] -= h
        f_plus = float(forward(spec, p_plus, x) @ upstream)
        f_minus = float(forward(spec, p_minus, x) @ upstream)
        grad[k] = (f_plus - f_minus) / (2.0 * h)
    return grad


def finite_difference_input_grad(spec, params, x, upstream, h=1e-5):
    from climoe.nn.mlp import forward

    grad = np.zeros_like(x)
    for k in range(x.size):
        x_plus = x.copy()
        x_plus[k] += h
        x_minus = x.copy()
        x_minus[k] -= h
        grad[k] = (float(forward(spec, params, x_plus) @ upstream) - float(forward(spec, params, x_minus) @ upstream)) / (2.0 * h)
    return grad


def assert_grad_close(analytic, numeric, rtol=1e-4, atol=1e-7):
    denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), atol / rtol)
    rel = np.abs(analytic - numeric) / denom
    assert rel.max() <= rtol, f"worst relative gradient error {rel.max():.2e}"


def draw_input_off_relu_kinks(spec, params, rng, margin=1e-3):
    """Random input whose pre-activations all sit away from the relu kink,
    so central differences never straddle the non-differentiable point."""
    from climoe.nn.mlp import forward_cached

    for _ in range(200):
        x = rng.standard_normal(spec.input_dim)
        _, _, pres = forward_cached(spec, params, x)
        if all(np.abs(z).min() > margin for z in pres if z.size):
            return x
    raise AssertionError("could not find an input clear of relu kinks")
