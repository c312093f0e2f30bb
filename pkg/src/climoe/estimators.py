"""Scikit-learn style estimator wrappers around the training loops.

These exist so the models drop into the wider ecosystem (`get_params`,
`clone`, pipelines, grid search); all math lives in `climoe.moe`/`climoe.nn`.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from climoe import rng
from climoe.moe import (
    VARIANTS,
    MlpPredictor,
    MoePredictor,
    VariantConfig,
    train_variant,
)
from climoe.nn.mlp import MlpSpec, forward, init_params
from climoe.moe import TrainConfig, train_single_mlp


class MlpRegressor(RegressorMixin, BaseEstimator):
    """Single dense network trained on MSE (the paper-style baseline)."""

    def __init__(
        self,
        hidden_dims=(64, 64, 64),
        epochs=30,
        batch_size=256,
        learning_rate=1e-3,
        optimizer="adam",
        seed=0,
    ):
        self.hidden_dims = hidden_dims
        self.epochs = epochs
        self.batch_size = batch_size
        self.learning_rate = learning_rate
        self.optimizer = optimizer
        self.seed = seed

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=np.float64)
        self.spec_ = MlpSpec(input_dim=X.shape[1], hidden_dims=tuple(self.hidden_dims), output_dim=1)
        params = init_params(self.spec_, rng.mix_key(self.seed, 0xE0))
        cfg = TrainConfig(
            epochs=self.epochs,
            batch_size=self.batch_size,
            seed=self.seed,
            learning_rate=self.learning_rate,
            optimizer=self.optimizer,
        )
        self.params_, self.log_ = train_single_mlp(self.spec_, params, (X, y), cfg)
        return self

    def predict(self, X):
        check_is_fitted(self, "params_")
        X = check_array(X, dtype=np.float64)
        return forward(self.spec_, self.params_, X)[:, 0]


class MoeRegressor(RegressorMixin, BaseEstimator):
    """Mixture-of-experts regressor covering the paper's variants.

    variant: "adaptive" (pretrained experts + router), "no_pretraining"
    (joint end-to-end), or "no_specialization" (all experts every batch,
    no diversity term, then router).
    """

    def __init__(
        self,
        variant="adaptive",
        n_experts=16,
        expert_hidden=(64, 64),
        router_hidden=(64,),
        expert_epochs=40,
        router_epochs=15,
        joint_epochs=15,
        batch_size=256,
        lambda_div=0.01,
        tau=10.0,
        learning_rate=1e-3,
        optimizer="adam",
        seed=0,
    ):
        self.variant = variant
        self.n_experts = n_experts
        self.expert_hidden = expert_hidden
        self.router_hidden = router_hidden
        self.expert_epochs = expert_epochs
        self.router_epochs = router_epochs
        self.joint_epochs = joint_epochs
        self.batch_size = batch_size
        self.lambda_div = lambda_div
        self.tau = tau
        self.learning_rate = learning_rate
        self.optimizer = optimizer
        self.seed = seed

    def _variant_config(self) -> VariantConfig:
        return VariantConfig(
            n_experts=self.n_experts,
            expert_hidden=tuple(self.expert_hidden),
            router_hidden=tuple(self.router_hidden),
            expert_epochs=self.expert_epochs,
            router_epochs=self.router_epochs,
            joint_epochs=self.joint_epochs,
            batch_size=self.batch_size,
            lambda_div=self.lambda_div,
            tau=self.tau,
            learning_rate=self.learning_rate,
            optimizer=self.optimizer,
            seed=self.seed,
        )

    def fit(self, X, y):
        if self.variant not in VARIANTS or self.variant == "mlp_baseline":
            raise ValueError(f"variant must be one of {VARIANTS[:3]}, got {self.variant!r}")
        X, y = check_X_y(X, y, dtype=np.float64)
        predictor, self.log_ = train_variant(self.variant, (X, y), self._variant_config())
        assert isinstance(predictor, MoePredictor)
        self.pool_ = predictor.pool
        self.router_ = predictor.router
        return self

    def predict(self, X):
        check_is_fitted(self, "pool_")
        X = check_array(X, dtype=np.float64)
        return MoePredictor(self.pool_, self.router_).predict(X)

    def gate_weights(self, X):
        """Router weights per input (rows on the simplex)."""
        check_is_fitted(self, "pool_")
        X = check_array(X, dtype=np.float64)
        from climoe.moe import route

        return route(self.router_, X)
