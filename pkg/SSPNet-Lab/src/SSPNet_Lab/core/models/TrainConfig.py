from dataclasses import dataclass

from .AttackConfig import AttackConfig
from .OptimizerKind import OptimizerKind
from .TrainMode import TrainMode


@dataclass(frozen=True)
class TrainConfig:
    mode: TrainMode = TrainMode.STANDARD
    optimizer: OptimizerKind = OptimizerKind.SGD_NESTEROV
    lr: float = 0.1
    weight_decay: float = 5e-4
    momentum: float = 0.9
    betas: tuple[float, float] = (0.9, 0.999)
    adam_eps: float = 1e-8
    batch_size: int = 128
    epochs: int = 20
    lr_decay_epochs: tuple[int, ...] = (60, 100, 140)
    lr_decay_factor: float = 0.1
    # Uniform noise radius for standard-mode augmentation.
    noise_epsilon: float = 0.3
    attack: AttackConfig | None = None
    # Optional attack used for the per-epoch adv_acc column.
    eval_attack: AttackConfig | None = None
    beta10_bounds: tuple[float, float] = (0.1, 10.0)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "mode", TrainMode(self.mode))
        object.__setattr__(self, "optimizer", OptimizerKind(self.optimizer))
        if self.lr <= 0:
            raise ValueError(f"lr must be positive, got {self.lr}")
        if self.batch_size < 1 or self.epochs < 1:
            raise ValueError("batch_size and epochs must be positive")
        if not 0 < self.lr_decay_factor < 1:
            raise ValueError(f"lr_decay_factor must lie in (0, 1), got {self.lr_decay_factor}")
        if self.noise_epsilon < 0:
            raise ValueError("noise_epsilon must be non-negative")
        if self.mode == TrainMode.ADVERSARIAL and self.attack is None:
            raise ValueError("adversarial mode needs an attack config")
        low, high = self.beta10_bounds
        if not 0 < low < high:
            raise ValueError(f"invalid beta10 bounds {self.beta10_bounds}")
