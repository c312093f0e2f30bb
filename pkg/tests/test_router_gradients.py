import numpy as np

from climoe.moe import (
    ExpertPool,
    _gate_upstream,
    combine,
    expert_outputs,
    init_pool,
    init_router,
    softmax,
)
from climoe.nn.mlp import MlpSpec, backward, forward

from conftest import assert_grad_close


def _router_loss(router_spec, router_values, pool, X, y):
    from climoe.nn.mlp import ParamVector

    params = ParamVector(router_values, router_spec.spec_hash())
    w = softmax(forward(router_spec, params, X))
    yhat = combine(w, expert_outputs(pool, X))
    return float(np.mean((yhat - y) ** 2))


def test_router_gradient_matches_finite_differences_two_expert_toy():
    rs = np.random.default_rng(0)
    spec = MlpSpec(5, (4,), 1)
    pool = init_pool(spec, 2, seed=3)
    router = init_router(5, 2, (4,), seed=1)
    X = rs.uniform(0.0, 1.0, size=(12, 5))
    y = rs.uniform(0.0, 1.0, size=12)

    e = expert_outputs(pool, X)
    logits = forward(router.spec, router.params, X)
    w = softmax(logits)
    yhat = combine(w, e)
    dl_dyhat = (2.0 / y.size) * (yhat - y)
    grad, _ = backward(router.spec, router.params, X, _gate_upstream(w, e, yhat, dl_dyhat))

    h = 1e-5
    numeric = np.zeros_like(grad)
    base = router.params.values
    for k in range(base.size):
        plus = base.copy()
        plus[k] += h
        minus = base.copy()
        minus[k] -= h
        numeric[k] = (
            _router_loss(router.spec, plus, pool, X, y)
            - _router_loss(router.spec, minus, pool, X, y)
        ) / (2.0 * h)
    assert_grad_close(grad, numeric, rtol=1e-4)


def test_softmax_rows_sum_to_one_and_are_stable():
    z = np.array([[1000.0, 1000.0, 999.0], [-1000.0, 0.0, 1000.0]])
    w = softmax(z)
    assert np.all(np.isfinite(w))
    assert np.abs(w.sum(axis=1) - 1.0).max() < 1e-12
