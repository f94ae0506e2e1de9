"""
Parameterised pieces of a network: the residual function F, the block
wrapper that applies a combinator to it, and the ResBlock-E expansion.
"""

import math

import numpy as np

from ..errors import BlockError, ShapeError
from ..models import Activation, BlockKind, BlockSpec, LinearKind
from ..tensor import SeededRng, Tensor, conv2d, dense, group_norm, relu, sigmoid
from .combinators import block_forward, ralston_coefficients


def norm_groups(channels: int, linear_kind: LinearKind) -> int:
    """Largest divisor of ``channels`` not above 8; a single group for dense maps."""
    if linear_kind == LinearKind.DENSE:
        return 1
    return max(g for g in range(1, min(8, channels) + 1) if channels % g == 0)


def he_normal(rng: SeededRng, shape: tuple[int, ...], fan_in: int) -> np.ndarray:
    return rng.normal(0.0, math.sqrt(2.0 / fan_in), shape)


class Linear:
    """3x3 (or 1x1) convolution without bias, or a dense map with bias."""

    def __init__(
        self,
        in_channels: int,
        out_channels: int,
        linear_kind: LinearKind,
        rng: SeededRng,
        kernel_size: int = 3,
        stride: int = 1,
        bias: bool = True,
    ):
        self.linear_kind = LinearKind(linear_kind)
        self.stride = stride
        if self.linear_kind == LinearKind.CONV:
            fan_in = in_channels * kernel_size * kernel_size
            shape = (out_channels, in_channels, kernel_size, kernel_size)
            self.weight = Tensor(he_normal(rng, shape, fan_in), requires_grad=True)
            self.bias = None
        else:
            self.weight = Tensor(he_normal(rng, (in_channels, out_channels), in_channels), requires_grad=True)
            self.bias = Tensor(np.zeros(out_channels), requires_grad=True) if bias else None

    def __call__(self, x: Tensor) -> Tensor:
        if self.linear_kind == LinearKind.CONV:
            return conv2d(x, self.weight, stride=self.stride, same_padding=True)
        return dense(x, self.weight, self.bias)

    def parameters(self, prefix: str) -> list[tuple[str, Tensor]]:
        params = [(f"{prefix}.weight", self.weight)]
        if self.bias is not None:
            params.append((f"{prefix}.bias", self.bias))
        return params


class GroupNorm:
    def __init__(self, channels: int, linear_kind: LinearKind, eps: float = 1e-5):
        self.groups = norm_groups(channels, linear_kind)
        self.eps = eps
        self.gamma = Tensor(np.ones(channels), requires_grad=True)
        self.beta = Tensor(np.zeros(channels), requires_grad=True)

    def __call__(self, x: Tensor) -> Tensor:
        return group_norm(x, self.groups, self.gamma, self.beta, self.eps)

    def parameters(self, prefix: str) -> list[tuple[str, Tensor]]:
        return [(f"{prefix}.gamma", self.gamma), (f"{prefix}.beta", self.beta)]


class ResidualFunction:
    """
    F(x; theta): norm -> activation -> linear, twice.
    In a block F maps c channels to c channels; inside ResBlock-E it maps
    c_in to c_out and carries the stride on its first linear map.
    """

    def __init__(
        self,
        in_channels: int,
        linear_kind: LinearKind,
        rng: SeededRng,
        activation: Activation = Activation.RELU,
        out_channels: int | None = None,
        stride: int = 1,
    ):
        out_channels = out_channels or in_channels
        self.in_channels = in_channels
        self.out_channels = out_channels
        self.activation = Activation(activation)
        self.norm1 = GroupNorm(in_channels, linear_kind)
        self.linear1 = Linear(in_channels, out_channels, linear_kind, rng, stride=stride)
        self.norm2 = GroupNorm(out_channels, linear_kind)
        self.linear2 = Linear(out_channels, out_channels, linear_kind, rng)

    def _act(self, x: Tensor) -> Tensor:
        return relu(x) if self.activation == Activation.RELU else sigmoid(x)

    def __call__(self, x: Tensor) -> Tensor:
        h = self.linear1(self._act(self.norm1(x)))
        return self.linear2(self._act(self.norm2(h)))

    def parameters(self, prefix: str) -> list[tuple[str, Tensor]]:
        return (
            self.norm1.parameters(f"{prefix}.norm1")
            + self.linear1.parameters(f"{prefix}.linear1")
            + self.norm2.parameters(f"{prefix}.norm2")
            + self.linear2.parameters(f"{prefix}.linear2")
        )


class Block:
    """One block of a group: a combinator wrapped around a single shared F."""

    def __init__(self, spec: BlockSpec, residual: ResidualFunction):
        if residual.in_channels != spec.channels or residual.out_channels != spec.channels:
            raise BlockError(f"block of width {spec.channels} got F of width {residual.in_channels}->{residual.out_channels}")
        self.spec = spec
        self.residual = residual
        self.beta10 = None
        if spec.kind == BlockKind.ARK:
            self.beta10 = Tensor(spec.beta10_init, requires_grad=True)

    def __call__(self, x: Tensor) -> Tensor:
        return block_forward(self.spec.kind, x, self.residual, beta10=self.beta10, alpha21=self.spec.alpha21)

    def ssp_sufficient(self) -> bool:
        if self.beta10 is None:
            return True
        return ralston_coefficients(float(self.beta10), self.spec.alpha21).ssp_sufficient

    def parameters(self, prefix: str) -> list[tuple[str, Tensor]]:
        params = self.residual.parameters(f"{prefix}.F")
        if self.beta10 is not None:
            params.append((f"{prefix}.beta10", self.beta10))
        return params


class ExpansionBlock:
    """ResBlock-E: y = conv1x1(x) + F_e(x), both paths widening c_in -> c_out."""

    def __init__(
        self,
        in_channels: int,
        out_channels: int,
        linear_kind: LinearKind,
        rng: SeededRng,
        activation: Activation = Activation.RELU,
        stride: int = 1,
    ):
        if out_channels <= in_channels:
            raise BlockError(f"expansion must widen channels, got {in_channels} -> {out_channels}")
        self.shortcut = Linear(in_channels, out_channels, linear_kind, rng, kernel_size=1, stride=stride, bias=False)
        self.residual = ResidualFunction(
            in_channels, linear_kind, rng, activation, out_channels=out_channels, stride=stride
        )

    def __call__(self, x: Tensor) -> Tensor:
        return resblock_e_forward(x, self)

    def parameters(self, prefix: str) -> list[tuple[str, Tensor]]:
        return self.shortcut.parameters(f"{prefix}.shortcut") + self.residual.parameters(f"{prefix}.F")


def resblock_e_forward(x: Tensor, block: ExpansionBlock) -> Tensor:
    if x.shape[1] != block.residual.in_channels:
        raise ShapeError(f"ResBlock-E expects {block.residual.in_channels} channels, got {x.shape[1]}")
    return block.shortcut(x) + block.residual(x)
