from enum import Enum


class SchemeKind(str, Enum):
    """Time steppers of the Burgers' lab."""

    EULER = "euler"
    SSP2 = "ssp2"
    SSP3 = "ssp3"
    MIDRK2 = "midrk2"
    NONTVD2 = "nontvd2"
    ARK = "ark"
