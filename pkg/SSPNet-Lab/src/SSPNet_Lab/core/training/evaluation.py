"""
Clean and attacked accuracy, and accuracy as a function of attack radius.
"""

import logging
from typing import Callable, Sequence

import numpy as np
import pandas as pd

from ..attacks import attack_batches
from ..models import AttackConfig, Dataset
from ..tensor import SeededRng, Tensor, no_grad

logger = logging.getLogger(__name__)


def predict(model: Callable[[Tensor], Tensor], images: np.ndarray, batch_size: int = 256) -> np.ndarray:
    """Argmax class per sample; ties go to the lowest class index."""
    predictions = []
    with no_grad():
        for start in range(0, len(images), batch_size):
            logits = model(Tensor(images[start:start + batch_size])).data
            predictions.append(np.argmax(logits, axis=1))
    if not predictions:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate(predictions)


def evaluate(
    model,
    dataset: Dataset,
    attack: AttackConfig | None = None,
    method: str = "pgd",
    rng: SeededRng | None = None,
    batch_size: int = 256,
) -> float:
    """Fraction of argmax-correct predictions on clean or attacked inputs."""
    if len(dataset) == 0:
        return 0.0
    images = dataset.images
    if attack is not None:
        images = attack_batches(
            model, images, dataset.labels, method, attack, rng or SeededRng(0), batch_size
        )
    correct = predict(model, images, batch_size) == dataset.labels
    return float(np.mean(correct))


def robustness_sweep(
    model,
    dataset: Dataset,
    method: str,
    eps_list: Sequence[float],
    alpha: float | None = None,
    iterations: int = 20,
    rng: SeededRng | None = None,
    random_start: bool = True,
) -> pd.DataFrame:
    """
    One row per radius: (epsilon, method, accuracy). epsilon = 0 is the
    clean accuracy. PGD step size defaults to epsilon / 4 when ``alpha``
    is not given.
    """
    rng = rng or SeededRng(0)
    rows = []
    for index, epsilon in enumerate(eps_list):
        epsilon = float(epsilon)
        if epsilon == 0.0:
            accuracy = evaluate(model, dataset)
        else:
            step = epsilon if method == "fgsm" else (alpha if alpha is not None else epsilon / 4.0)
            config = AttackConfig(
                epsilon=epsilon,
                alpha=step,
                iterations=1 if method == "fgsm" else iterations,
                random_start=random_start and method == "pgd",
            )
            accuracy = evaluate(model, dataset, config, method, rng.spawn(index))
        logger.info("%s eps=%.4f accuracy=%.4f", method, epsilon, accuracy)
        rows.append({"epsilon": epsilon, "method": method, "accuracy": accuracy})
    return pd.DataFrame(rows, columns=["epsilon", "method", "accuracy"])
