"""
Tape gradients of small networks against Richardson central differences.
"""

import logging
from dataclasses import dataclass

import numpy as np

from ..models import Activation, BlockKind, LinearKind, NetworkSpec
from ..tensor import SeededRng, Tensor, backward, finite_difference_gradient, max_relative_error, softmax_cross_entropy
from .network import build_network

logger = logging.getLogger(__name__)

# Relative errors are taken against |numeric| + floor.
GRADIENT_FLOOR = 1e-8


@dataclass(frozen=True)
class GradcheckResult:
    block_kind: str
    seed: int
    parameters: int
    max_rel_error: float
    worst_parameter: str

    def as_row(self) -> dict:
        return {
            "block_kind": self.block_kind,
            "seed": self.seed,
            "parameters": self.parameters,
            "max_rel_error": self.max_rel_error,
            "worst_parameter": self.worst_parameter,
        }


def small_network_spec(block_kind: BlockKind | str, beta10_init: float = 1.0) -> NetworkSpec:
    """Two dense groups (widths 3 and 4) with sigmoid activations and no stem."""
    return NetworkSpec(
        block_kind=BlockKind(block_kind),
        blocks_per_group=1,
        group_channels=(3, 4),
        in_channels=3,
        num_classes=3,
        linear_kind=LinearKind.DENSE,
        activation=Activation.SIGMOID,
        beta10_init=beta10_init,
        stem=False,
    )


def check_network_gradients(
    block_kind: BlockKind | str,
    seed: int,
    batch: int = 4,
    h: float = 1e-4,
) -> GradcheckResult:
    rng = SeededRng(seed)
    # Ark blocks start away from beta10 = 1 so dLoss/dbeta10 is generic.
    beta10 = float(rng.uniform(0.6, 1.4))
    network = build_network(small_network_spec(block_kind, beta10), rng.spawn(0))
    x = Tensor(rng.normal(0.0, 1.0, (batch, 3)))
    y = rng.integers(0, 3, batch)

    def loss(_=None):
        return softmax_cross_entropy(network(x), y)

    backward(loss())
    worst, worst_name = 0.0, ""
    for name, param in network.named_parameters():
        analytic = param.grad.copy()
        numeric = finite_difference_gradient(loss, param, h=h, richardson=True)
        error = max_relative_error(analytic, numeric.data, floor=GRADIENT_FLOOR)
        if error > worst:
            worst, worst_name = error, name
    result = GradcheckResult(BlockKind(block_kind).value, seed, network.num_parameters(), worst, worst_name)
    logger.debug("gradcheck %s seed %d: %.3e (%s)", result.block_kind, seed, worst, worst_name)
    return result
