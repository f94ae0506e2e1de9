"""
Perturbation growth ratio: how much a map stretches the distance between
an input and its perturbed partner, averaged over pairs.
"""

import logging
from typing import Callable, Iterable

import numpy as np

from ..attacks import attack_batches
from ..errors import MetricError
from ..models import AttackConfig, MetricRecord, PerturbationKind
from ..tensor import SeededRng, Tensor, no_grad

logger = logging.getLogger(__name__)


def _values(v) -> np.ndarray:
    return np.asarray(v.data if isinstance(v, Tensor) else v, dtype=np.float64)


def _check_order(p: int) -> None:
    if p not in (1, 2):
        raise MetricError(f"norm order must be 1 or 2, got {p}")


def perturbation_growth_ratio(f: Callable, pairs: Iterable[tuple], p: int = 2) -> float:
    """mean over pairs of ||f(x) - f(x')||_p / ||x - x'||_p, tensors flattened."""
    _check_order(p)
    ratios = []
    for i, (x, x_prime) in enumerate(pairs):
        x, x_prime = _values(x), _values(x_prime)
        distance = np.linalg.norm((x - x_prime).reshape(-1), ord=p)
        if distance == 0.0:
            raise MetricError(f"pair {i} has zero input distance")
        spread = np.linalg.norm((_values(f(x)) - _values(f(x_prime))).reshape(-1), ord=p)
        ratios.append(spread / distance)
    if not ratios:
        raise MetricError("no pairs given")
    return float(np.mean(ratios))


def _row_ratios(inputs: np.ndarray, inputs_prime: np.ndarray, outputs: np.ndarray, outputs_prime: np.ndarray, p: int) -> np.ndarray:
    batch = len(inputs)
    distance = np.linalg.norm((inputs - inputs_prime).reshape(batch, -1), ord=p, axis=1)
    if np.any(distance == 0.0):
        raise MetricError(f"pair {int(np.argmin(distance))} has zero input distance")
    spread = np.linalg.norm((outputs - outputs_prime).reshape(batch, -1), ord=p, axis=1)
    return spread / distance


def group_growth_ratios(
    network,
    x: np.ndarray,
    x_prime: np.ndarray,
    orders: tuple[int, ...] = (1, 2),
    model: str = "",
    batch_size: int = 256,
) -> list[MetricRecord]:
    """
    Per-group ratio between the features entering a group (after any
    expansion) and the features leaving it. Row i of ``x`` pairs with
    row i of ``x_prime``.
    """
    for p in orders:
        _check_order(p)
    ratios: dict[tuple[int, int], list[np.ndarray]] = {}
    with no_grad():
        for start in range(0, len(x), batch_size):
            sl = slice(start, start + batch_size)
            features, _ = network.forward_features(Tensor(x[sl]))
            features_prime, _ = network.forward_features(Tensor(x_prime[sl]))
            for g, ((h_in, h_out), (h_in_p, h_out_p)) in enumerate(zip(features, features_prime)):
                for p in orders:
                    ratios.setdefault((g, p), []).append(
                        _row_ratios(h_in.data, h_in_p.data, h_out.data, h_out_p.data, p)
                    )
    records = []
    for (g, p), chunks in sorted(ratios.items()):
        value = float(np.mean(np.concatenate(chunks)))
        records.append(MetricRecord("pgr", value, {"model": model, "group": g}, norm_order=p))
        logger.debug("%s group %d p=%d ratio %.4f", model, g, p, value)
    return records


def perturbation_pairs(
    network,
    images: np.ndarray,
    labels: np.ndarray,
    kind: PerturbationKind,
    attack: AttackConfig,
    rng: SeededRng,
    noise_draws: int = 1,
) -> tuple[np.ndarray, np.ndarray]:
    """
    (x, x') rows. Adversarial partners come from PGD against ``network``
    itself; noise partners are clip(x + U(-eps, eps)), ``noise_draws`` per input.
    """
    kind = PerturbationKind(kind)
    images = np.asarray(images, dtype=np.float64)
    if kind == PerturbationKind.ADVERSARIAL:
        return images, attack_batches(network, images, labels, "pgd", attack, rng)
    if noise_draws < 1:
        raise MetricError(f"noise_draws must be >= 1, got {noise_draws}")
    x = np.repeat(images, noise_draws, axis=0)
    noise = rng.uniform(-attack.epsilon, attack.epsilon, x.shape)
    return x, np.clip(x + noise, 0.0, 1.0)
