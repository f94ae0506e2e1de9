from enum import Enum


class BlockKind(str, Enum):
    """Block combinators available inside a network group."""

    RESBLOCK = "resblock"
    SSP2 = "ssp2"
    SSP3 = "ssp3"
    MIDRK2 = "midrk2"
    ARK = "ark"
