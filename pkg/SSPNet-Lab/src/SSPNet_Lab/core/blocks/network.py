"""
Whole-network assembly: stem, groups of N blocks with ResBlock-E
expansions between them, then global average pooling and a dense head.
"""

import logging

import numpy as np

from ..errors import ShapeError
from ..models import LinearKind, NetworkSpec
from ..tensor import SeededRng, Tensor, dense, global_avg_pool, reshape
from .layers import Block, ExpansionBlock, Linear, ResidualFunction

logger = logging.getLogger(__name__)


class Network:
    def __init__(self, spec: NetworkSpec, rng: SeededRng):
        self.spec = spec
        kind = spec.linear_kind
        self.stem = None
        if spec.stem:
            self.stem = Linear(
                spec.in_channels, spec.group_channels[0], kind, rng, stride=spec.stem_stride
            )
        self.groups: list[list[Block]] = []
        self.expansions: list[ExpansionBlock] = []
        previous = spec.group_channels[0]
        for g, block_specs in enumerate(spec.groups):
            channels = spec.group_channels[g]
            if g > 0:
                self.expansions.append(
                    ExpansionBlock(
                        previous, channels, kind, rng, spec.activation, stride=spec.expansion_stride
                    )
                )
            self.groups.append(
                [
                    Block(block_spec, ResidualFunction(channels, kind, rng, spec.activation))
                    for block_spec in block_specs
                ]
            )
            previous = channels
        self.head = Linear(previous, spec.num_classes, LinearKind.DENSE, rng)

    # ---- parameters ---------------------------------------------------------

    def named_parameters(self) -> list[tuple[str, Tensor]]:
        params: list[tuple[str, Tensor]] = []
        if self.stem is not None:
            params += self.stem.parameters("stem")
        for g, blocks in enumerate(self.groups):
            if g > 0:
                params += self.expansions[g - 1].parameters(f"expand{g}")
            for b, block in enumerate(blocks):
                params += block.parameters(f"group{g}.block{b}")
        params += self.head.parameters("head")
        return params

    def parameters(self) -> dict[str, Tensor]:
        return dict(self.named_parameters())

    def num_parameters(self) -> int:
        return sum(p.size for _, p in self.named_parameters())

    def zero_grad(self) -> None:
        for _, p in self.named_parameters():
            p.zero_grad()

    def ark_blocks(self) -> list[tuple[str, Block]]:
        return [
            (f"group{g}.block{b}", block)
            for g, blocks in enumerate(self.groups)
            for b, block in enumerate(blocks)
            if block.beta10 is not None
        ]

    def clamp_beta10(self, low: float, high: float) -> None:
        for _, block in self.ark_blocks():
            block.beta10.data = np.asarray(np.clip(block.beta10.data, low, high), dtype=np.float64)

    # ---- forward ------------------------------------------------------------

    def _prepare(self, x) -> Tensor:
        x = x if isinstance(x, Tensor) else Tensor(x)
        if self.spec.linear_kind == LinearKind.DENSE and x.ndim > 2:
            x = reshape(x, (x.shape[0], -1))
        if x.ndim < 2 or x.shape[1] != self.spec.in_channels:
            raise ShapeError(
                f"network expects {self.spec.in_channels} input channels, got shape {x.shape}"
            )
        if self.spec.linear_kind == LinearKind.CONV and x.ndim != 4:
            raise ShapeError(f"convolutional network expects (batch, c, h, w), got {x.shape}")
        return x

    def embed(self, x) -> Tensor:
        x = self._prepare(x)
        return self.stem(x) if self.stem is not None else x

    def group_forward(self, g: int, h: Tensor) -> Tensor:
        """Apply the N blocks of group ``g``."""
        for block in self.groups[g]:
            h = block(h)
        return h

    def head_forward(self, h: Tensor) -> Tensor:
        return dense(global_avg_pool(h), self.head.weight, self.head.bias)

    def forward_features(self, x) -> tuple[list[tuple[Tensor, Tensor]], Tensor]:
        """Logits plus (input, output) features of every group."""
        h = self.embed(x)
        features = []
        for g in range(len(self.groups)):
            if g > 0:
                h = self.expansions[g - 1](h)
            out = self.group_forward(g, h)
            features.append((h, out))
            h = out
        return features, self.head_forward(h)

    def __call__(self, x) -> Tensor:
        return self.forward_features(x)[1]


def build_network(spec: NetworkSpec, seed: int | SeededRng = 0) -> Network:
    rng = seed if isinstance(seed, SeededRng) else SeededRng(seed)
    network = Network(spec, rng)
    logger.debug("built %s network with %d parameters", spec.block_kind.value, network.num_parameters())
    return network


def network_forward(network: Network, x) -> Tensor:
    return network(x)
