"""
Tests for the block combinators, network assembly and the order study.
"""

import numpy as np
import pytest

from helpers import dense_spec

from SSPNet_Lab.core.blocks import (
    ExpansionBlock,
    Network,
    ark_block_forward,
    block_forward,
    build_network,
    convergence_study,
    midrk2_block_forward,
    network_forward,
    norm_groups,
    ralston_coefficients,
    res_block_forward,
    resblock_e_forward,
    ssp2_block_forward,
    ssp3_block_forward,
)
from SSPNet_Lab.core.errors import BlockError, ShapeError
from SSPNet_Lab.core.models import Activation, BlockKind, LinearKind, NetworkSpec
from SSPNet_Lab.core.tensor import SeededRng, Tensor, backward, softmax_cross_entropy


def random_residual(seed: int, d: int = 6):
    """F(v) = tanh(A v + c) with a random (A, c)."""
    rng = SeededRng(seed)
    a = rng.normal(0.0, 0.5, (d, d))
    c = rng.normal(0.0, 0.1, d)
    return rng.normal(0.0, 1.0, (3, d)), lambda v: np.tanh(v @ a + c)


class TestBlockIdentities:
    """Test suite for algebraic identities between the combinators."""

    @pytest.mark.parametrize("kind", list(BlockKind))
    def test_zero_residual_returns_input_exactly(self, kind):
        """Verify F == 0 gives y == x bit-exactly for every kind."""
        x = SeededRng(0).normal(0, 1, (4, 5))
        y = block_forward(kind, x, np.zeros_like, beta10=1.3)
        np.testing.assert_array_equal(y, x)

    def test_ssp2_is_average_of_input_and_two_resblocks(self):
        """Verify SSP2(x) = 1/2 x + 1/2 ResBlock(ResBlock(x)) on 100 random cases."""
        for seed in range(100):
            x, F = random_residual(seed)
            twice = res_block_forward(res_block_forward(x, F), F)
            np.testing.assert_allclose(ssp2_block_forward(x, F), 0.5 * x + 0.5 * twice, rtol=0, atol=1e-12)

    def test_ssp3_stage_identities(self):
        """Verify SSP3 matches its convex-combination stages on 100 random cases."""
        for seed in range(100):
            x, F = random_residual(seed)
            x1 = x + F(x)
            x2 = 0.75 * x + 0.25 * (x1 + F(x1))
            expected = x / 3.0 + 2.0 / 3.0 * (x2 + F(x2))
            np.testing.assert_allclose(ssp3_block_forward(x, F), expected, rtol=0, atol=1e-12)

    def test_ark_at_default_equals_ssp2(self):
        """Verify Ark(beta10=1, alpha21=1/2) is SSP2 on 100 random cases."""
        for seed in range(100):
            x, F = random_residual(seed)
            np.testing.assert_allclose(
                ark_block_forward(x, F, beta10=1.0, alpha21=0.5), ssp2_block_forward(x, F), rtol=0, atol=1e-12
            )

    def test_midrk2_uses_half_step_midpoint(self):
        """Verify mid-RK2 is x + F(x + F(x)/2)."""
        x, F = random_residual(3)
        np.testing.assert_allclose(midrk2_block_forward(x, F), x + F(x + 0.5 * F(x)), atol=1e-14)

    def test_shape_changing_residual_is_rejected(self):
        """Verify F must preserve the state shape."""
        with pytest.raises(ShapeError):
            res_block_forward(np.ones(3), lambda v: np.ones(4))

    def test_combinators_accept_floats(self):
        """Verify scalar states work for the order study."""
        assert ssp2_block_forward(1.0, lambda v: v) == pytest.approx(2.5)
        assert ssp3_block_forward(1.0, lambda v: v) == pytest.approx(8.0 / 3.0)


class TestRalstonCoefficients:
    """Test suite for the Ark coefficient family."""

    def test_default_coefficients(self):
        """Verify beta10 = 1, alpha21 = 1/2 gives the SSP2 weights."""
        c = ralston_coefficients(1.0, 0.5)
        assert (c.alpha20, c.beta20, c.beta21) == (0.5, 0.0, 0.5)
        assert c.ssp_sufficient

    def test_negative_beta20_is_not_ssp_sufficient(self):
        """Verify coefficient signs drive the SSP flag."""
        c = ralston_coefficients(2.0, 0.5)
        assert c.beta20 == pytest.approx(-0.25)
        assert not c.ssp_sufficient

    def test_zero_beta10_is_rejected(self):
        """Verify beta10 = 0 raises BlockError."""
        with pytest.raises(BlockError):
            ralston_coefficients(0.0, 0.5)

    def test_second_order_conditions(self):
        """Verify the Ralston constraints for several beta10 values."""
        for beta10 in (0.5, 0.8, 1.2, 3.0):
            c = ralston_coefficients(beta10, 0.5)
            # Consistency and second order with alpha10 = 1.
            assert c.alpha20 + 0.5 == pytest.approx(1.0)
            assert c.beta20 + 0.5 * beta10 + c.beta21 == pytest.approx(1.0)
            assert c.beta21 * beta10 == pytest.approx(0.5)


class TestConvergenceOrder:
    """Test suite for observed order of accuracy on u' = -u."""

    def test_observed_slopes(self):
        """Verify slopes 1, 2 and 3 within 0.2 over dt = 1/8 .. 1/64."""
        result = convergence_study()
        expected = {"resblock": 1.0, "ssp2": 2.0, "midrk2": 2.0, "ark": 2.0, "ssp3": 3.0}
        for kind, order in expected.items():
            assert result.slopes[kind] == pytest.approx(order, abs=0.2), kind

    def test_frame_has_one_row_per_kind_and_dt(self):
        """Verify the tabular form."""
        frame = convergence_study(kinds=["ssp2", "ssp3"]).to_frame()
        assert list(frame.columns) == ["kind", "dt", "error", "slope"]
        assert len(frame) == 8


class TestNetwork:
    """Test suite for network assembly and forward passes."""

    def test_norm_groups(self):
        """Verify the largest divisor rule and the dense single group."""
        assert norm_groups(16, LinearKind.CONV) == 8
        assert norm_groups(12, LinearKind.CONV) == 6
        assert norm_groups(5, LinearKind.CONV) == 5
        assert norm_groups(16, LinearKind.DENSE) == 1

    def test_conv_network_shapes(self):
        """Verify logits and per-group features for a two-group conv network."""
        spec = NetworkSpec(block_kind="ssp3", blocks_per_group=1, group_channels=(4, 8))
        network = build_network(spec, seed=0)
        x = SeededRng(1).uniform(0, 1, (2, 1, 8, 8))
        features, logits = network.forward_features(Tensor(x))
        assert logits.shape == (2, 10)
        assert [f[0].shape for f in features] == [(2, 4, 8, 8), (2, 8, 4, 4)]
        assert [f[1].shape for f in features] == [(2, 4, 8, 8), (2, 8, 4, 4)]

    def test_dense_network_flattens_images(self):
        """Verify dense mode accepts image-shaped input."""
        network = build_network(dense_spec("midrk2"), seed=0)
        assert network(SeededRng(2).uniform(0, 1, (3, 1, 4, 4))).shape == (3, 10)

    def test_parameter_names(self):
        """Verify the naming scheme used by checkpoints."""
        spec = NetworkSpec(block_kind="ark", blocks_per_group=1, group_channels=(4, 8))
        names = Network(spec, SeededRng(0)).parameters()
        for name in (
            "stem.weight",
            "group0.block0.F.norm1.gamma",
            "group0.block0.F.linear2.weight",
            "group0.block0.beta10",
            "expand1.shortcut.weight",
            "expand1.F.norm1.beta",
            "group1.block0.beta10",
            "head.weight",
            "head.bias",
        ):
            assert name in names

    def test_same_seed_same_parameters(self):
        """Verify initialization is determined by the seed."""
        a = build_network(dense_spec(), seed=4).parameters()
        b = build_network(dense_spec(), seed=4).parameters()
        c = build_network(dense_spec(), seed=5).parameters()
        assert all(np.array_equal(a[k].data, b[k].data) for k in a)
        assert not np.array_equal(a["head.weight"].data, c["head.weight"].data)

    def test_wrong_input_channels(self):
        """Verify a channel mismatch raises ShapeError."""
        network = build_network(NetworkSpec(blocks_per_group=1, group_channels=(4,)), seed=0)
        with pytest.raises(ShapeError):
            network(np.zeros((1, 3, 8, 8)))

    def test_expansion_must_widen(self):
        """Verify ResBlock-E rejects non-increasing widths."""
        with pytest.raises(BlockError):
            ExpansionBlock(8, 4, LinearKind.CONV, SeededRng(0))

    def test_beta10_clamp(self):
        """Verify Ark coefficients are clamped into bounds."""
        network = build_network(dense_spec("ark"), seed=0)
        (_, block), = network.ark_blocks()
        block.beta10.data = np.array(25.0)
        network.clamp_beta10(0.1, 10.0)
        assert float(block.beta10) == 10.0
        assert block.beta10.shape == ()

    def test_beta10_receives_gradient(self):
        """Verify the learnable Ark coefficient is on the tape."""
        network = build_network(dense_spec("ark", activation=Activation.SIGMOID, beta10_init=0.8), seed=0)
        x = SeededRng(3).uniform(0, 1, (4, 1, 4, 4))
        backward(softmax_cross_entropy(network(x), [0, 1, 2, 3]))
        (_, block), = network.ark_blocks()
        assert block.beta10.grad is not None
        assert block.beta10.grad.shape == ()

    @pytest.mark.parametrize("linear_kind", [LinearKind.CONV, LinearKind.DENSE])
    def test_parameter_counts_match_resblock(self, linear_kind):
        """Verify SSP blocks add no parameters and Ark adds one per block."""
        base = dict(blocks_per_group=2, group_channels=(4, 8), linear_kind=linear_kind)
        counts = {kind: build_network(NetworkSpec(block_kind=kind, **base), seed=0).num_parameters() for kind in BlockKind}
        resblock = counts[BlockKind.RESBLOCK]
        for kind in (BlockKind.SSP2, BlockKind.SSP3, BlockKind.MIDRK2):
            assert counts[kind] == resblock
        ark_blocks = build_network(NetworkSpec(block_kind=BlockKind.ARK, **base), seed=0).ark_blocks()
        assert len(ark_blocks) == 4
        assert counts[BlockKind.ARK] == resblock + len(ark_blocks)

    @pytest.mark.parametrize("kind", list(BlockKind))
    def test_zero_network_returns_head_bias(self, kind):
        """Verify logits equal the head bias when every other weight is zero."""
        network = build_network(NetworkSpec(block_kind=kind, blocks_per_group=1, group_channels=(4, 8)), seed=0)
        for name, param in network.named_parameters():
            if not name.endswith("beta10"):
                param.data = np.zeros_like(param.data)
        bias = np.arange(10.0) - 4.5
        network.head.bias.data = bias.copy()
        logits = network_forward(network, Tensor(SeededRng(6).uniform(0, 1, (2, 1, 8, 8))))
        np.testing.assert_array_equal(logits.data, np.tile(bias, (2, 1)))


class TestExpansionBlock:
    """Test suite for the widening ResBlock-E."""

    def test_identity_shortcut_copies_input(self):
        """Verify an identity 1x1 path with F_e = 0 puts x in the first channels."""
        block = ExpansionBlock(2, 4, LinearKind.CONV, SeededRng(0))
        weight = np.zeros((4, 2, 1, 1))
        weight[0, 0] = weight[1, 1] = 1.0
        block.shortcut.weight.data = weight
        block.residual.linear2.weight.data = np.zeros_like(block.residual.linear2.weight.data)
        x = SeededRng(1).uniform(0, 1, (3, 2, 5, 5))
        y = resblock_e_forward(Tensor(x), block).data
        np.testing.assert_array_equal(y[:, :2], x)
        np.testing.assert_array_equal(y[:, 2:], 0.0)

    def test_shortcut_matches_pointwise_projection(self):
        """Verify the strided 1x1 shortcut against a channel projection of every other pixel."""
        block = ExpansionBlock(3, 6, LinearKind.CONV, SeededRng(2), stride=2)
        x = SeededRng(3).uniform(0, 1, (2, 3, 6, 6))
        expected = np.einsum("oi,bihw->bohw", block.shortcut.weight.data[:, :, 0, 0], x[:, :, ::2, ::2])
        np.testing.assert_allclose(block.shortcut(Tensor(x)).data, expected, rtol=0, atol=1e-12)
        y = resblock_e_forward(Tensor(x), block).data
        np.testing.assert_allclose(y, expected + block.residual(Tensor(x)).data, rtol=0, atol=1e-12)
