"""
Tests for training: schedule, optimizers, the two training loops,
evaluation and checkpoints.
"""

import dataclasses

import numpy as np
import pytest

from helpers import balanced_dataset, dense_spec

from SSPNet_Lab.core.blocks import build_network
from SSPNet_Lab.core.errors import CheckpointError, OptimizerError, TrainingError
from SSPNet_Lab.core.models import AttackConfig, OptimizerKind, TrainConfig, TrainMode
from SSPNet_Lab.core.tensor import SeededRng, Tensor
from SSPNet_Lab.core.tensor import sum as tsum
from SSPNet_Lab.core.training import (
    Optimizer,
    adam_step,
    adversarial_train,
    config_hash,
    evaluate,
    load_checkpoint,
    lr_at_epoch,
    predict,
    restore_network,
    robustness_sweep,
    save_checkpoint,
    sgd_nesterov_step,
    standard_train,
    train,
)
from SSPNet_Lab.core.training import loops


def small_config(**overrides) -> TrainConfig:
    settings = dict(lr=0.05, epochs=2, batch_size=16, noise_epsilon=0.1, seed=3)
    settings.update(overrides)
    return TrainConfig(**settings)


def parameters_of(network) -> dict[str, np.ndarray]:
    return {name: p.data.copy() for name, p in network.named_parameters()}


class TestLearningRateSchedule:
    """Test suite for the piecewise-constant schedule."""

    def test_milestones(self):
        """Verify decays at epochs 60, 100 and 140."""
        config = TrainConfig(lr=0.1)
        assert lr_at_epoch(config, 0) == 0.1
        assert lr_at_epoch(config, 59) == 0.1
        assert lr_at_epoch(config, 60) == pytest.approx(0.01)
        assert lr_at_epoch(config, 140) == pytest.approx(1e-4)

    def test_negative_epoch(self):
        """Verify epochs must be non-negative."""
        with pytest.raises(ValueError):
            lr_at_epoch(TrainConfig(), -1)


class TestOptimizers:
    """Test suite for the SGD-Nesterov and Adam update rules."""

    @pytest.mark.parametrize("step", [sgd_nesterov_step, adam_step])
    def test_zero_gradient_zero_decay_is_identity(self, step):
        """Verify parameters are unchanged without gradient or decay."""
        params = {"w": np.array([1.0, -2.0])}
        updated = step(params, {"w": np.zeros(2)}, {}, 0.1, weight_decay=0.0)
        np.testing.assert_array_equal(updated["w"], params["w"])

    def test_nesterov_matches_direct_recursion(self):
        """Verify the update against a hand-rolled buffer/parameter recursion on a quadratic."""
        curvature, lr, momentum, decay = 0.7, 0.1, 0.9, 0.01
        p, buf = 3.0, 0.0
        params, state = {"p": np.array(3.0)}, {}
        for _ in range(25):
            g = curvature * p + decay * p
            buf = momentum * buf + g
            p = p - lr * (g + momentum * buf)
            grads = {"p": curvature * params["p"]}
            params = sgd_nesterov_step(params, grads, state, lr, decay, momentum)
            assert float(params["p"]) == pytest.approx(p, abs=1e-12)

    def test_adam_approaches_minimizer_monotonically(self):
        """Verify 50 Adam steps on p^2/2 shrink |p| at every step after warmup."""
        params, state = {"p": np.array(5.0)}, {}
        history = [5.0]
        for _ in range(50):
            params = adam_step(params, {"p": np.array(params["p"])}, state, lr=0.05)
            history.append(abs(float(params["p"])))
        assert all(b < a for a, b in zip(history[5:], history[6:]))
        assert history[-1] < history[0] - 1.0

    def test_non_finite_gradient_names_parameter(self):
        """Verify OptimizerError carries the offending parameter."""
        with pytest.raises(OptimizerError) as excinfo:
            sgd_nesterov_step({"a": np.ones(2), "b": np.ones(2)}, {"a": np.ones(2), "b": np.array([1.0, np.nan])}, {}, 0.1)
        assert excinfo.value.parameter == "b"

    def test_no_decay_parameters_skip_weight_decay(self):
        """Verify decay applies only to parameters outside no_decay."""
        params = {"w": np.ones(2), "norm.gamma": np.ones(2)}
        grads = {k: np.zeros(2) for k in params}
        updated = sgd_nesterov_step(params, grads, {}, 0.1, 0.5, 0.0, frozenset({"norm.gamma"}))
        np.testing.assert_allclose(updated["w"], 0.95)
        np.testing.assert_array_equal(updated["norm.gamma"], 1.0)

    def test_network_optimizer_excludes_norm_and_beta10(self):
        """Verify the network optimizer never decays gamma, beta or beta10."""
        network = build_network(dense_spec("ark"), seed=0)
        optimizer = Optimizer(TrainConfig(), network)
        assert "group0.block0.beta10" in optimizer.no_decay
        assert "group0.block0.F.norm1.gamma" in optimizer.no_decay
        assert "group0.block0.F.norm1.beta" in optimizer.no_decay
        assert "head.weight" not in optimizer.no_decay

    def test_optimizer_step_clamps_beta10(self):
        """Verify beta10 is clamped after every step."""
        network = build_network(dense_spec("ark"), seed=0)
        (_, block), = network.ark_blocks()
        block.beta10.data = np.array(40.0)
        Optimizer(TrainConfig(optimizer=OptimizerKind.ADAM), network).step(0.01)
        assert float(block.beta10) == 10.0


class TestTrainingLoops:
    """Test suite for standard and adversarial training."""

    def test_runs_are_bit_reproducible(self, tiny_dataset):
        """Verify (config, seed) determines the losses and parameters exactly."""
        results = []
        for _ in range(2):
            network = build_network(dense_spec("ssp2"), seed=0)
            result = standard_train(network, tiny_dataset, small_config())
            results.append((parameters_of(network), [r.value for r in result.records]))
        (params_a, records_a), (params_b, records_b) = results
        assert records_a == records_b
        assert all(np.array_equal(params_a[k], params_b[k]) for k in params_a)

    def test_zero_epsilon_adversarial_equals_noise_free_standard(self, tiny_dataset):
        """Verify eps = 0 adversarial training degenerates to plain training."""
        standard = build_network(dense_spec(), seed=0)
        standard_train(standard, tiny_dataset, small_config(noise_epsilon=0.0))
        adversarial = build_network(dense_spec(), seed=0)
        config = small_config(mode=TrainMode.ADVERSARIAL, attack=AttackConfig(0.0, 0.01, 3))
        adversarial_train(adversarial, tiny_dataset, config)
        a, b = parameters_of(standard), parameters_of(adversarial)
        assert all(np.array_equal(a[k], b[k]) for k in a)

    def test_different_seeds_give_different_parameters(self, tiny_dataset):
        """Verify the training seed changes the result."""
        finals = []
        for seed in (1, 2):
            network = build_network(dense_spec(), seed=0)
            standard_train(network, tiny_dataset, small_config(seed=seed))
            finals.append(parameters_of(network)["head.weight"])
        assert not np.array_equal(*finals)

    def test_augmentation_keeps_pixels_in_range(self, tiny_dataset):
        """Verify uniform noise is clamped to [0, 1]."""
        network = build_network(dense_spec(), seed=0)
        x = tiny_dataset.images
        out = loops._perturbed_batch(network, x, tiny_dataset.labels, small_config(noise_epsilon=0.5), SeededRng(0))
        assert out.min() >= 0.0 and out.max() <= 1.0
        assert not np.array_equal(out, x)

    def test_adversarial_batch_is_feasible(self, tiny_dataset):
        """Verify the training-time adversary stays in the epsilon ball."""
        network = build_network(dense_spec(), seed=0)
        config = small_config(mode=TrainMode.ADVERSARIAL, attack=AttackConfig(0.1, 0.03, 3))
        x = tiny_dataset.images
        out = loops._perturbed_batch(network, x, tiny_dataset.labels, config, SeededRng(0))
        assert np.max(np.abs(out - x)) <= 0.1 + 1e-12

    def test_records_per_epoch(self, tiny_dataset):
        """Verify lr, loss, accuracy and Ark coefficient records for every epoch."""
        network = build_network(dense_spec("ark"), seed=0)
        config = small_config(eval_attack=AttackConfig(0.1, 0.05, 2))
        result = train(network, tiny_dataset, config, eval_dataset=tiny_dataset)
        names = [(r.name, r.index["epoch"]) for r in result.records]
        for epoch in (0, 1):
            for name in ("lr", "loss", "clean_acc", "adv_acc", "beta10", "ssp_sufficient"):
                assert (name, epoch) in names
        assert result.epochs == 2

    def test_training_reduces_loss(self):
        """Verify a few epochs fit the learnable synthetic data."""
        data = balanced_dataset(per_class=8, seed=2)
        network = build_network(dense_spec(), seed=0)
        config = small_config(epochs=15, optimizer=OptimizerKind.ADAM, lr=0.01, weight_decay=0.0, noise_epsilon=0.0)
        losses = [r.value for r in train(network, data, config).records if r.name == "loss"]
        assert losses[-1] < losses[0]

    def test_non_finite_loss_reports_epoch_and_batch(self, tiny_dataset, monkeypatch):
        """Verify a NaN loss aborts with its location."""
        monkeypatch.setattr(loops, "softmax_cross_entropy", lambda logits, y: tsum(logits) * float("nan"))
        network = build_network(dense_spec(), seed=0)
        with pytest.raises(TrainingError) as excinfo:
            standard_train(network, tiny_dataset, small_config())
        assert (excinfo.value.epoch, excinfo.value.batch) == (0, 0)

    def test_mode_mismatch(self, tiny_dataset):
        """Verify each loop checks the configured mode."""
        network = build_network(dense_spec(), seed=0)
        with pytest.raises(TrainingError):
            adversarial_train(network, tiny_dataset, small_config())


class TestEvaluation:
    """Test suite for accuracy and the robustness sweep."""

    def test_model_agrees_with_itself(self, tiny_dataset):
        """Verify accuracy 1.0 on the model's own predictions."""
        network = build_network(dense_spec(), seed=0)
        labels = predict(network, tiny_dataset.images)
        relabelled = dataclasses.replace(tiny_dataset, labels=labels)
        assert evaluate(network, relabelled) == 1.0

    def test_constant_logits_on_balanced_data(self, tiny_dataset):
        """Verify ties go to class 0, giving accuracy 0.1 on balanced data."""
        def constant(x):
            return Tensor(np.zeros((len(x), 10)))

        assert evaluate(constant, tiny_dataset) == pytest.approx(0.1)

    def test_sweep_zero_radius_is_clean_accuracy(self, tiny_dataset):
        """Verify the eps = 0 row equals clean accuracy."""
        network = build_network(dense_spec(), seed=0)
        frame = robustness_sweep(network, tiny_dataset, "pgd", [0.0, 0.1], iterations=3)
        assert list(frame.columns) == ["epsilon", "method", "accuracy"]
        assert frame["accuracy"].iloc[0] == evaluate(network, tiny_dataset)
        assert len(frame) == 2


class TestCheckpoint:
    """Test suite for checkpoint files."""

    def test_round_trip_is_bit_exact(self, tmp_path, tiny_dataset):
        """Verify save -> load -> forward equals forward before saving."""
        network = build_network(dense_spec("ark", beta10_init=0.7), seed=3)
        path = save_checkpoint(tmp_path / "model.ckpt", network, epoch=4, rng_state=SeededRng(1).state, config_digest=config_hash("x = 1\n"))
        checkpoint = load_checkpoint(path)
        restored = restore_network(checkpoint)
        np.testing.assert_array_equal(restored(tiny_dataset.images).data, network(tiny_dataset.images).data)
        assert evaluate(restored, tiny_dataset) == evaluate(network, tiny_dataset)
        assert checkpoint.epoch == 4
        assert checkpoint.config_hash == config_hash("x = 1\n")
        assert checkpoint.spec == network.spec
        assert checkpoint.rng_state == SeededRng(1).state

    def test_file_starts_with_magic(self, tmp_path):
        """Verify the format tag."""
        path = save_checkpoint(tmp_path / "m.ckpt", build_network(dense_spec(), seed=0))
        assert path.read_bytes()[:8] == b"SSPNLAB1"

    def test_bad_magic(self, tmp_path):
        """Verify foreign files are rejected."""
        path = tmp_path / "bad.ckpt"
        path.write_bytes(b"NOTALAB!" + b"\0" * 16)
        with pytest.raises(CheckpointError):
            load_checkpoint(path)

    def test_truncated_data(self, tmp_path):
        """Verify a short parameter section is rejected."""
        path = save_checkpoint(tmp_path / "m.ckpt", build_network(dense_spec(), seed=0))
        path.write_bytes(path.read_bytes()[:-16])
        with pytest.raises(CheckpointError):
            load_checkpoint(path)
