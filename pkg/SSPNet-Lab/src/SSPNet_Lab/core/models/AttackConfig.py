from dataclasses import dataclass


@dataclass(frozen=True)
class AttackConfig:
    """
    l-infinity attack settings in normalized pixel units [0, 1].
    epsilon = 0 is accepted: it pins every iterate to the clean input.
    """

    epsilon: float
    alpha: float
    iterations: int = 1
    random_start: bool = True
    norm: str = "inf"

    def __post_init__(self):
        if self.epsilon < 0:
            raise ValueError(f"epsilon must be non-negative, got {self.epsilon}")
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")
        if self.norm != "inf":
            raise ValueError("only the l-infinity norm is supported")
