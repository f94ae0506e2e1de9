from dataclasses import dataclass

from .BlockKind import BlockKind


@dataclass(frozen=True)
class BlockSpec:
    kind: BlockKind
    channels: int
    # Ark only: alpha21 is fixed per block, beta10 is learned from beta10_init.
    alpha21: float = 0.5
    beta10_init: float = 1.0

    def __post_init__(self):
        if self.channels < 1:
            raise ValueError(f"channels must be positive, got {self.channels}")
        if self.kind == BlockKind.ARK and self.beta10_init == 0:
            raise ValueError("Ark beta10 must be non-zero")
