import numpy as np
import pytest

from climoe.errors import ConfigError, ContractError
from climoe.moe import (
    ExpertPool,
    TrainConfig,
    combine,
    diversity_loss,
    epoch_batches,
    expert_outputs,
    expert_seed,
    freeze_all,
    init_pool,
    init_router,
    load_pool,
    mean_pairwise_distance,
    predict,
    route,
    save_pool,
    train_experts,
    train_router,
    train_single_mlp,
)
from climoe.nn.mlp import MlpSpec, ParamVector, init_params
from climoe.nn.optim import OptimState, optimizer_step


@pytest.fixture
def toy_data():
    rs = np.random.default_rng(3)
    X = rs.uniform(0.0, 1.0, size=(600, 8))
    y = 2.0 * X[:, 0] - X[:, 1] + 0.1 * rs.standard_normal(600)
    return X, y


def _toy_pool(n_experts=4, seed=0, input_dim=8):
    spec = MlpSpec(input_dim, (6,), 1)
    return init_pool(spec, n_experts, seed)


def _constant_expert(spec: MlpSpec, value: float) -> ParamVector:
    v = np.zeros(spec.n_params)
    v[-1] = value  # final bias; zero weights make the output constant
    return ParamVector(v, spec.spec_hash())


class TestDiversityLoss:
    def test_identical_vectors_give_zero(self):
        pool = _toy_pool()
        pool.params[1] = pool.params[0].copy()
        assert diversity_loss(pool, 0, 1, tau=10.0) == 0.0

    def test_hand_computed_euclidean_norm(self):
        spec = MlpSpec(1, (), 1)
        pool = ExpertPool(
            spec=spec,
            params=[
                ParamVector(np.array([1.0, 0.0]), spec.spec_hash()),
                ParamVector(np.array([0.0, 1.0]), spec.spec_hash()),
            ],
            frozen=np.zeros(2, dtype=bool),
        )
        assert diversity_loss(pool, 0, 1, tau=10.0) == pytest.approx(-np.sqrt(2.0))

    def test_cap_applies_beyond_tau(self):
        spec = MlpSpec(1, (), 1)
        pool = ExpertPool(
            spec=spec,
            params=[
                ParamVector(np.array([50.0, 0.0]), spec.spec_hash()),
                ParamVector(np.array([0.0, 0.0]), spec.spec_hash()),
            ],
            frozen=np.zeros(2, dtype=bool),
        )
        assert diversity_loss(pool, 0, 1, tau=10.0) == -10.0

    def test_same_index_pair_rejected(self):
        with pytest.raises(ConfigError):
            diversity_loss(_toy_pool(), 2, 2, tau=10.0)


class TestTrainExperts:
    def test_rerun_with_same_seed_is_bit_identical(self, toy_data):
        cfg = TrainConfig(epochs=4, batch_size=64, seed=5)
        pool_a, _ = train_experts(_toy_pool(seed=1), toy_data, cfg)
        pool_b, _ = train_experts(_toy_pool(seed=1), toy_data, cfg)
        assert pool_a.hashes() == pool_b.hashes()

    def test_unselected_experts_unchanged_each_epoch(self, toy_data):
        cfg = TrainConfig(epochs=6, batch_size=64, seed=2)
        pool = _toy_pool(n_experts=5, seed=0)
        before = pool.hashes()
        pool, log = train_experts(pool, toy_data, cfg)
        after = pool.hashes()
        touched = set()
        for rec in log:
            touched.add(rec["expert_i"])
            touched.add(rec["expert_j"])
        for k in range(5):
            if k not in touched:
                assert after[k] == before[k]
            else:
                assert after[k] != before[k]

    def test_lambda_zero_two_experts_match_independent_mlps(self, toy_data):
        X, y = toy_data
        cfg = TrainConfig(epochs=5, batch_size=64, seed=7, lambda_div=0.0)
        spec = MlpSpec(8, (6,), 1)
        pool = init_pool(spec, 2, seed=3)
        pool, _ = train_experts(pool, toy_data, cfg)
        for k in range(2):
            solo = init_params(spec, expert_seed(3, k))
            solo, _ = train_single_mlp(spec, solo, toy_data, cfg)
            # trajectories coincide up to GEMM summation order
            assert np.allclose(solo.values, pool.params[k].values, rtol=1e-9, atol=1e-10)

    def test_diversity_pushes_experts_apart(self, toy_data):
        base = dict(epochs=10, batch_size=64, seed=4, tau=100.0)
        pool_div, _ = train_experts(_toy_pool(seed=2), toy_data, TrainConfig(lambda_div=0.01, **base))
        pool_plain, _ = train_experts(_toy_pool(seed=2), toy_data, TrainConfig(lambda_div=0.0, **base))
        assert mean_pairwise_distance(pool_div) > mean_pairwise_distance(pool_plain)

    def test_log_records_pair_and_losses(self, toy_data):
        _, log = train_experts(_toy_pool(), toy_data, TrainConfig(epochs=3, batch_size=128, seed=0))
        assert len(log) == 3
        for rec in log:
            assert rec["phase"] == "experts"
            assert rec["expert_i"] != rec["expert_j"]
            assert np.isfinite(rec["loss_i"]) and np.isfinite(rec["loss_j"])

    def test_epochs_below_one_rejected(self, toy_data):
        with pytest.raises(ConfigError):
            train_experts(_toy_pool(), toy_data, TrainConfig(epochs=0))


class TestPoolIO:
    def test_save_load_round_trip_hashes_equal(self, tmp_path, toy_data):
        pool, _ = train_experts(_toy_pool(), toy_data, TrainConfig(epochs=2, batch_size=64))
        save_pool(pool, tmp_path / "pool")
        loaded = load_pool(tmp_path / "pool")
        assert loaded.hashes() == pool.hashes()
        assert loaded.frozen.all()  # loaded pools arrive frozen

    def test_load_with_wrong_spec_rejected(self, tmp_path):
        pool = _toy_pool()
        save_pool(pool, tmp_path / "pool")
        from climoe.errors import SchemaError

        with pytest.raises(SchemaError):
            load_pool(tmp_path / "pool", expected_spec=MlpSpec(8, (7,), 1))

    def test_truncated_expert_file_is_corruption_error(self, tmp_path):
        pool = _toy_pool()
        save_pool(pool, tmp_path / "pool")
        victim = tmp_path / "pool" / "expert_01.bin"
        victim.write_bytes(victim.read_bytes()[:-4])
        from climoe.errors import SchemaError

        with pytest.raises(SchemaError):
            load_pool(tmp_path / "pool")

    def test_missing_pool_reported(self, tmp_path):
        from climoe.errors import SchemaError

        with pytest.raises(SchemaError, match="expert pool not found"):
            load_pool(tmp_path / "nope")


class TestTrainRouter:
    def test_pool_hash_unchanged_by_router_training(self, toy_data):
        pool, _ = train_experts(_toy_pool(), toy_data, TrainConfig(epochs=2, batch_size=64))
        freeze_all(pool)
        before = pool.hashes()
        router = init_router(8, pool.n_experts, (6,), seed=0)
        train_router(router, pool, toy_data, TrainConfig(epochs=5, batch_size=64))
        assert pool.hashes() == before

    def test_unfrozen_pool_rejected_before_any_step(self, toy_data):
        pool = _toy_pool()
        pool.frozen[:] = True
        pool.frozen[2] = False
        router = init_router(8, pool.n_experts, (6,), seed=0)
        before = pool.hashes()
        with pytest.raises(ContractError):
            train_router(router, pool, toy_data, TrainConfig(epochs=1))
        assert pool.hashes() == before

    def test_router_learns_to_prefer_the_correct_constant_expert(self):
        # expert outputs fixed at 1.0 and 2.0; targets all 2.0
        spec = MlpSpec(4, (3,), 1)
        pool = ExpertPool(
            spec=spec,
            params=[_constant_expert(spec, 1.0), _constant_expert(spec, 2.0)],
            frozen=np.ones(2, dtype=bool),
        )
        rs = np.random.default_rng(0)
        X = rs.uniform(0.0, 1.0, size=(400, 4))
        y = np.full(400, 2.0)
        router = init_router(4, 2, (4,), seed=1)
        router, log = train_router(router, pool, (X, y), TrainConfig(epochs=60, batch_size=64, seed=1))
        w = route(router, X)
        assert w[:, 1].mean() > 0.95
        assert log[-1]["loss"] < log[0]["loss"]

    def test_gate_weights_form_a_simplex(self, toy_data):
        X, _ = toy_data
        router = init_router(8, 6, (5,), seed=9)
        w = route(router, X)
        assert np.all(w >= 0.0) and np.all(w <= 1.0)
        assert np.abs(w.sum(axis=1) - 1.0).max() <= 1e-6


class TestPredict:
    def test_weighted_combination_hand_computed(self):
        assert combine(np.array([0.3, 0.7]), np.array([1.0, 2.0])) == pytest.approx(1.7)

    def test_one_hot_weights_select_single_expert(self):
        spec = MlpSpec(3, (4,), 1)
        pool = init_pool(spec, 3, seed=0)
        x = np.array([0.1, 0.2, 0.3])
        outs = expert_outputs(pool, x)
        w = np.array([0.0, 1.0, 0.0])
        assert combine(w, outs) == outs[1]

    def test_constant_experts_give_constant_prediction(self):
        spec = MlpSpec(2, (2,), 1)
        pool = ExpertPool(
            spec=spec,
            params=[_constant_expert(spec, 3.5) for _ in range(4)],
            frozen=np.ones(4, dtype=bool),
        )
        router = init_router(2, 4, (3,), seed=2)
        out = predict(router, pool, np.array([0.4, 0.6]))
        assert out == pytest.approx(3.5, abs=1e-12)

    def test_predict_is_pure(self):
        spec = MlpSpec(2, (2,), 1)
        pool = init_pool(spec, 2, seed=1)
        router = init_router(2, 2, (2,), seed=1)
        x = np.array([0.5, 0.5])
        a = predict(router, pool, x)
        b = predict(router, pool, x)
        assert a == b


class TestTrainVariant:
    def test_no_specialization_log_has_zero_diversity_contribution(self, toy_data):
        from climoe.moe import VariantConfig, train_variant

        cfg = VariantConfig(
            n_experts=4, expert_hidden=(6,), router_hidden=(6,),
            expert_epochs=4, all_expert_epochs=2, router_epochs=2, batch_size=128, seed=0,
        )
        _, log = train_variant("no_specialization", toy_data, cfg)
        expert_records = [r for r in log if r["phase"] == "experts"]
        assert expert_records
        assert all(r["loss_div"] == 0.0 for r in expert_records)
        assert all("expert_i" not in r for r in expert_records)

    def test_no_pretraining_log_has_no_expert_selection_records(self, toy_data):
        from climoe.moe import VariantConfig, train_variant

        cfg = VariantConfig(
            n_experts=4, expert_hidden=(6,), router_hidden=(6,),
            joint_epochs=3, batch_size=128, seed=0,
        )
        _, log = train_variant("no_pretraining", toy_data, cfg)
        assert all(r["phase"] == "joint" for r in log)
        assert all("expert_i" not in r and "expert_j" not in r for r in log)

    def test_mlp_baseline_parameter_count_formula(self, toy_data):
        from climoe.moe import VariantConfig, train_variant

        cfg = VariantConfig(baseline_hidden=(5, 4, 3), baseline_epochs=1, batch_size=128, seed=0)
        pred, _ = train_variant("mlp_baseline", toy_data, cfg)
        d = 8
        expected = d * 5 + 5 + 5 * 4 + 4 + 4 * 3 + 3 + 3 * 1 + 1
        assert pred.params.values.size == expected

    def test_unknown_variant_rejected(self, toy_data):
        from climoe.moe import VariantConfig, train_variant

        with pytest.raises(ConfigError):
            train_variant("lstm", toy_data, VariantConfig())

    def test_equal_work_default_for_all_expert_epochs(self):
        from climoe.moe import VariantConfig

        cfg = VariantConfig(n_experts=16, expert_epochs=640)
        assert cfg.resolved_all_expert_epochs() == 80
        assert VariantConfig(all_expert_epochs=7).resolved_all_expert_epochs() == 7


class TestEpochBatches:
    def test_batches_cover_all_indices_once(self):
        seen = np.concatenate(list(epoch_batches(103, 20, seed=1, epoch=0)))
        assert sorted(seen.tolist()) == list(range(103))

    def test_different_epochs_shuffle_differently(self):
        a = np.concatenate(list(epoch_batches(50, 10, seed=1, epoch=0)))
        b = np.concatenate(list(epoch_batches(50, 10, seed=1, epoch=1)))
        assert not np.array_equal(a, b)
