from enum import Enum


class LinearKind(str, Enum):
    """Linear map used inside the residual function."""

    CONV = "conv"
    DENSE = "dense"
