from enum import Enum


class PerturbationKind(str, Enum):
    """How the perturbed partner x' of a PGR pair is produced."""

    ADVERSARIAL = "adversarial"
    NOISE = "noise"
