from dataclasses import dataclass, field

from .Activation import Activation
from .BlockKind import BlockKind
from .BlockSpec import BlockSpec
from .LinearKind import LinearKind


def parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in {"1", "true", "yes", "on"}:
        return True
    if lowered in {"0", "false", "no", "off"}:
        return False
    raise ValueError(f"not a boolean: {text!r}")


@dataclass(frozen=True)
class NetworkSpec:
    """
    Groups of N equal-width blocks joined by ResBlock-E expansions,
    followed by global average pooling and a dense classifier.
    """

    block_kind: BlockKind = BlockKind.RESBLOCK
    blocks_per_group: int = 6
    group_channels: tuple[int, ...] = (16, 32, 64)
    in_channels: int = 1
    num_classes: int = 10
    linear_kind: LinearKind = LinearKind.CONV
    activation: Activation = Activation.RELU
    alpha21: float = 0.5
    beta10_init: float = 1.0
    stem: bool = True
    stem_stride: int = 1
    expansion_stride: int = 2
    dt: float = field(default=1.0, init=False)

    def __post_init__(self):
        object.__setattr__(self, "block_kind", BlockKind(self.block_kind))
        object.__setattr__(self, "linear_kind", LinearKind(self.linear_kind))
        object.__setattr__(self, "activation", Activation(self.activation))
        object.__setattr__(self, "group_channels", tuple(int(c) for c in self.group_channels))
        if not self.group_channels:
            raise ValueError("at least one group is required")
        if any(b <= a for a, b in zip(self.group_channels, self.group_channels[1:])):
            raise ValueError(f"group channels must strictly increase: {self.group_channels}")
        if self.blocks_per_group < 0:
            raise ValueError("blocks_per_group must be non-negative")
        if self.expansion_stride < 1 or self.stem_stride < 1:
            raise ValueError("strides must be >= 1")
        if not self.stem and self.in_channels != self.group_channels[0]:
            raise ValueError("without a stem the input must already have the first group width")

    @property
    def groups(self) -> list[list[BlockSpec]]:
        return [
            [
                BlockSpec(self.block_kind, channels, self.alpha21, self.beta10_init)
                for _ in range(self.blocks_per_group)
            ]
            for channels in self.group_channels
        ]

    def to_settings(self) -> dict[str, str]:
        """Flat key/value form used by config files and checkpoint headers."""
        return {
            "block": self.block_kind.value,
            "blocks_per_group": str(self.blocks_per_group),
            "channels": ",".join(str(c) for c in self.group_channels),
            "in_channels": str(self.in_channels),
            "num_classes": str(self.num_classes),
            "linear": self.linear_kind.value,
            "activation": self.activation.value,
            "alpha21": repr(self.alpha21),
            "beta10_init": repr(self.beta10_init),
            "stem": str(self.stem).lower(),
            "stem_stride": str(self.stem_stride),
            "expansion_stride": str(self.expansion_stride),
        }

    @classmethod
    def from_settings(cls, settings: dict[str, str]) -> "NetworkSpec":
        return cls(
            block_kind=BlockKind(settings["block"]),
            blocks_per_group=int(settings["blocks_per_group"]),
            group_channels=tuple(int(c) for c in settings["channels"].split(",")),
            in_channels=int(settings["in_channels"]),
            num_classes=int(settings["num_classes"]),
            linear_kind=LinearKind(settings["linear"]),
            activation=Activation(settings["activation"]),
            alpha21=float(settings["alpha21"]),
            beta10_init=float(settings["beta10_init"]),
            stem=parse_bool(settings["stem"]),
            stem_stride=int(settings["stem_stride"]),
            expansion_stride=int(settings["expansion_stride"]),
        )
