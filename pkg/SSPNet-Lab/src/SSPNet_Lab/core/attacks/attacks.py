"""
FGSM and PGD under the l-infinity norm.

The loss is summed over the batch so each sample's input gradient is the
gradient of its own cross-entropy.
"""

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import AttackError, ShapeError
from ..models import AttackConfig
from ..tensor import SeededRng, Tensor, backward, softmax_cross_entropy

logger = logging.getLogger(__name__)

Model = Callable[[Tensor], Tensor]


@dataclass(frozen=True)
class FeasibleSet:
    """{x' : ||x' - x_nat||_inf <= epsilon} intersected with [0, 1]^m"""

    x_nat: np.ndarray
    epsilon: float

    def contains(self, x: np.ndarray, atol: float = 1e-12) -> bool:
        x = np.asarray(x)
        return bool(
            np.all(np.abs(x - self.x_nat) <= self.epsilon + atol)
            and np.all(x >= 0.0)
            and np.all(x <= 1.0)
        )


def project(x: np.ndarray, feasible: FeasibleSet) -> np.ndarray:
    """Clamp to the epsilon box around x_nat, then to the pixel range."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != feasible.x_nat.shape:
        raise ShapeError(f"cannot project {x.shape} onto a set around {feasible.x_nat.shape}")
    boxed = np.clip(x, feasible.x_nat - feasible.epsilon, feasible.x_nat + feasible.epsilon)
    return np.clip(boxed, 0.0, 1.0)


def input_gradient(model: Model, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """d(sum of per-sample cross-entropy)/dx at x."""
    x_tensor = Tensor(x, requires_grad=True)
    loss = softmax_cross_entropy(model(x_tensor), y, reduction="sum")
    if not loss.requires_grad:
        return np.zeros_like(x_tensor.data)
    backward(loss)
    grad = x_tensor.grad
    if not np.all(np.isfinite(grad)):
        raise AttackError("non-finite input gradient")
    return grad


def fgsm(model: Model, x: np.ndarray, y: np.ndarray, epsilon: float) -> np.ndarray:
    """x_adv = project(x + epsilon * sign(grad_x loss)); one gradient evaluation."""
    x = np.asarray(x, dtype=np.float64)
    step = epsilon * np.sign(input_gradient(model, x, y))
    return project(x + step, FeasibleSet(x, epsilon))


def pgd(
    model: Model,
    x_nat: np.ndarray,
    y: np.ndarray,
    config: AttackConfig,
    rng: SeededRng | None = None,
    x_init: np.ndarray | None = None,
) -> np.ndarray:
    """
    K steps of x <- project(x + alpha * sign(grad_x loss(x))).

    Starts from ``x_init`` when given (already perturbed by the caller),
    otherwise from x_nat plus Uniform(-eps, eps) noise if random_start.
    """
    x_nat = np.asarray(x_nat, dtype=np.float64)
    feasible = FeasibleSet(x_nat, config.epsilon)
    if x_init is not None:
        x = project(x_init, feasible)
    elif config.random_start:
        if rng is None:
            raise AttackError("random start needs a random stream")
        x = project(x_nat + rng.uniform(-config.epsilon, config.epsilon, x_nat.shape), feasible)
    else:
        x = x_nat.copy()
    for _ in range(config.iterations):
        x = project(x + config.alpha * np.sign(input_gradient(model, x, y)), feasible)
    return x


def attack_batches(
    model: Model,
    images: np.ndarray,
    labels: np.ndarray,
    method: str,
    config: AttackConfig,
    rng: SeededRng,
    batch_size: int = 128,
) -> np.ndarray:
    """Attack a whole array in batches; batch i draws from rng.spawn(i)."""
    adversarial = np.empty_like(np.asarray(images, dtype=np.float64))
    for index, start in enumerate(range(0, len(images), batch_size)):
        sl = slice(start, start + batch_size)
        if method == "fgsm":
            adversarial[sl] = fgsm(model, images[sl], labels[sl], config.epsilon)
        elif method == "pgd":
            adversarial[sl] = pgd(model, images[sl], labels[sl], config, rng.spawn(index))
        else:
            raise ValueError(f"unknown attack method '{method}'")
    logger.debug("%s attack on %d samples done", method, len(images))
    return adversarial
