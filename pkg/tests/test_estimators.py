import numpy as np
import pytest
from sklearn.base import clone

from climoe.estimators import MlpRegressor, MoeRegressor


@pytest.fixture(scope="module")
def toy():
    rs = np.random.default_rng(2)
    X = rs.uniform(0.0, 1.0, size=(500, 6))
    y = X @ np.array([1.0, -2.0, 0.5, 0.0, 3.0, -1.0]) + 0.05 * rs.standard_normal(500)
    return X, y


def test_mlp_regressor_fits_and_predicts(toy):
    X, y = toy
    est = MlpRegressor(hidden_dims=(16, 16, 16), epochs=30, batch_size=64, seed=0)
    est.fit(X, y)
    pred = est.predict(X)
    assert pred.shape == (500,)
    assert np.mean((pred - y) ** 2) < 0.2 * y.var()


def test_mlp_regressor_parameter_count_matches_layer_formula(toy):
    X, y = toy
    est = MlpRegressor(hidden_dims=(8, 4, 2), epochs=1, batch_size=128).fit(X, y)
    d = X.shape[1]
    expected = d * 8 + 8 + 8 * 4 + 4 + 4 * 2 + 2 + 2 * 1 + 1
    assert est.params_.values.size == expected


def test_estimators_support_get_params_and_clone(toy):
    est = MoeRegressor(n_experts=4, expert_epochs=2, router_epochs=2, seed=3)
    params = est.get_params()
    assert params["n_experts"] == 4
    assert params["variant"] == "adaptive"
    dup = clone(est)
    assert dup.get_params() == params


def test_moe_regressor_variants_train(toy):
    X, y = toy
    for variant in ("adaptive", "no_pretraining", "no_specialization"):
        est = MoeRegressor(
            variant=variant,
            n_experts=4,
            expert_hidden=(8,),
            router_hidden=(8,),
            expert_epochs=4,
            router_epochs=4,
            joint_epochs=4,
            batch_size=64,
            seed=0,
        )
        est.fit(X, y)
        pred = est.predict(X)
        assert pred.shape == (500,)
        assert np.isfinite(pred).all()


def test_moe_regressor_rejects_baseline_variant(toy):
    X, y = toy
    with pytest.raises(ValueError):
        MoeRegressor(variant="mlp_baseline").fit(X, y)


def test_gate_weights_lie_on_simplex(toy):
    X, y = toy
    est = MoeRegressor(
        n_experts=4,
        expert_hidden=(8,),
        router_hidden=(8,),
        expert_epochs=2,
        router_epochs=2,
        batch_size=64,
        seed=1,
    ).fit(X, y)
    w = est.gate_weights(X[:50])
    assert w.shape == (50, 4)
    assert np.all(w >= 0.0)
    assert np.abs(w.sum(axis=1) - 1.0).max() <= 1e-6


def test_fit_is_deterministic_per_seed(toy):
    X, y = toy
    a = MlpRegressor(hidden_dims=(8,), epochs=5, batch_size=64, seed=9).fit(X, y)
    b = MlpRegressor(hidden_dims=(8,), epochs=5, batch_size=64, seed=9).fit(X, y)
    assert np.array_equal(a.predict(X), b.predict(X))
