"""
Standard (noise-augmented) and PGD adversarial training loops.

Both loops draw the same random numbers in the same order: a batch
permutation per epoch and one uniform noise tensor per batch. With
epsilon = 0 the adversarial loop therefore reproduces standard training
exactly.
"""

import dataclasses
import logging
from dataclasses import dataclass, field

import numpy as np

from ..attacks import FeasibleSet, pgd, project
from ..blocks import Network
from ..errors import TrainingError
from ..models import Dataset, MetricRecord, TrainConfig, TrainMode
from ..tensor import SeededRng, Tensor, backward, softmax_cross_entropy
from .evaluation import evaluate
from .optim import Optimizer
from .schedule import lr_at_epoch

logger = logging.getLogger(__name__)


@dataclass
class TrainResult:
    network: Network
    records: list[MetricRecord] = field(default_factory=list)
    epochs: int = 0
    rng_state: dict | None = None


def _perturbed_batch(network, x, y, config: TrainConfig, rng: SeededRng) -> np.ndarray:
    if config.mode == TrainMode.ADVERSARIAL:
        attack = config.attack
        feasible = FeasibleSet(x, attack.epsilon)
        x_start = project(x + rng.uniform(-attack.epsilon, attack.epsilon, x.shape), feasible)
        # The explicit noise above is the random start.
        inner = dataclasses.replace(attack, random_start=False)
        return pgd(network, x, y, inner, x_init=x_start)
    noise = rng.uniform(-config.noise_epsilon, config.noise_epsilon, x.shape)
    return np.clip(x + noise, 0.0, 1.0)


def _epoch_records(network: Network, epoch: int, lr: float, losses: list[float], config, eval_dataset) -> list[MetricRecord]:
    index = {"epoch": epoch}
    records = [
        MetricRecord("lr", lr, index),
        MetricRecord("loss", float(np.mean(losses)) if losses else 0.0, index),
    ]
    if eval_dataset is not None:
        records.append(MetricRecord("clean_acc", evaluate(network, eval_dataset), index))
        if config.eval_attack is not None:
            adv = evaluate(network, eval_dataset, config.eval_attack, "pgd", SeededRng(config.seed).spawn(epoch))
            records.append(MetricRecord("adv_acc", adv, index))
    for name, block in network.ark_blocks():
        block_index = {"epoch": epoch, "block": name}
        records.append(MetricRecord("beta10", float(block.beta10), block_index))
        sufficient = block.ssp_sufficient()
        if not sufficient:
            logger.warning("%s: beta10=%.4f left the SSP-sufficient region", name, float(block.beta10))
        records.append(MetricRecord("ssp_sufficient", float(sufficient), block_index))
    return records


def train(
    network: Network,
    dataset: Dataset,
    config: TrainConfig,
    eval_dataset: Dataset | None = None,
) -> TrainResult:
    """Run ``config.epochs`` epochs of the loop selected by ``config.mode``."""
    if len(dataset) == 0:
        raise TrainingError("training set is empty")
    rng = SeededRng(config.seed)
    optimizer = Optimizer(config, network)
    result = TrainResult(network)
    n = len(dataset)
    for epoch in range(config.epochs):
        lr = lr_at_epoch(config, epoch)
        order = rng.permutation(n)
        losses = []
        for batch, start in enumerate(range(0, n, config.batch_size)):
            idx = order[start:start + config.batch_size]
            x, y = dataset.images[idx], dataset.labels[idx]
            x_in = _perturbed_batch(network, x, y, config, rng)
            loss = softmax_cross_entropy(network(Tensor(x_in)), y)
            value = loss.item()
            if not np.isfinite(value):
                raise TrainingError("non-finite loss", epoch, batch)
            backward(loss)
            optimizer.step(lr)
            losses.append(value)
            logger.debug("epoch %d batch %d loss %.6f", epoch, batch, value)
        records = _epoch_records(network, epoch, lr, losses, config, eval_dataset)
        result.records.extend(records)
        summary = ", ".join(f"{r.name}={r.value:.4f}" for r in records if "block" not in r.index)
        logger.info("epoch %d/%d: %s", epoch + 1, config.epochs, summary)
    result.epochs = config.epochs
    result.rng_state = rng.state
    return result


def standard_train(network, dataset, config: TrainConfig, eval_dataset=None) -> TrainResult:
    if config.mode != TrainMode.STANDARD:
        raise TrainingError(f"standard_train called with mode '{config.mode.value}'")
    return train(network, dataset, config, eval_dataset)


def adversarial_train(network, dataset, config: TrainConfig, eval_dataset=None) -> TrainResult:
    """PGD adversarial training: each step sees only the adversarial minibatch."""
    if config.mode != TrainMode.ADVERSARIAL or config.attack is None:
        raise TrainingError("adversarial_train needs adversarial mode with an attack config")
    return train(network, dataset, config, eval_dataset)
