from ..models import TrainConfig


def lr_at_epoch(config: TrainConfig, epoch: int) -> float:
    """Piecewise-constant: base lr times factor^(milestones reached)."""
    if epoch < 0:
        raise ValueError(f"epoch must be non-negative, got {epoch}")
    decays = sum(1 for milestone in config.lr_decay_epochs if epoch >= milestone)
    return config.lr * config.lr_decay_factor ** decays
