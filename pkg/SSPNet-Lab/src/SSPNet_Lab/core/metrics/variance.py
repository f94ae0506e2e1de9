"""
Monte-Carlo check of how much each block kind inflates the variance of
its input.

The residual function is a random signed permutation, drawn fresh for
every sample and every stage, so Var[F(v)] = Var[v] and every
cross-covariance vanishes in expectation.
"""

import logging
from dataclasses import dataclass

import numpy as np

from ..blocks import block_forward
from ..errors import MetricError
from ..models import BlockKind
from ..tensor import SeededRng

logger = logging.getLogger(__name__)

STDERR_BATCHES = 20

# Expected Var[out] / Var[x] under the harness assumptions.
EXPECTED_RATIOS = {
    BlockKind.RESBLOCK: 2.0,
    BlockKind.MIDRK2: 2.25,
    BlockKind.SSP2: 1.75,
    BlockKind.SSP3: 29.0 / 18.0,
}


@dataclass(frozen=True)
class VarianceResult:
    block_kind: str
    dimension: int
    samples: int
    ratio: float
    stderr: float

    def as_row(self) -> dict:
        return {
            "block_kind": self.block_kind,
            "d": self.dimension,
            "M": self.samples,
            "ratio": self.ratio,
            "stderr": self.stderr,
        }


class SignedPermutation:
    """F(v) = P v with an independent random signed permutation per row and call."""

    def __init__(self, rng: SeededRng):
        self.rng = rng
        self.calls = 0

    def __call__(self, v: np.ndarray) -> np.ndarray:
        self.calls += 1
        rows, width = v.shape
        order = self.rng.permuted_rows(rows, width)
        return self.rng.signs((rows, width)) * np.take_along_axis(v, order, axis=1)


def _pooled_ratio(out: np.ndarray, x: np.ndarray) -> float:
    return float(out.var() / x.var())


def variance_harness(
    block_kind: BlockKind | str,
    dimension: int = 64,
    samples: int = 100_000,
    rng: SeededRng | None = None,
    beta10: float = 1.0,
    alpha21: float = 0.5,
) -> VarianceResult:
    """
    Draw x ~ N(0, I_d) for ``samples`` rows, push it through one block and
    return the coordinate-pooled variance ratio with a batch standard
    error. ``block_kind="zero"`` runs the F == 0 control.
    """
    if dimension < 2:
        raise MetricError(f"dimension must be >= 2, got {dimension}")
    if samples < STDERR_BATCHES:
        raise MetricError(f"need at least {STDERR_BATCHES} samples, got {samples}")
    rng = rng or SeededRng(0)
    x = rng.normal(0.0, 1.0, (samples, dimension))
    if block_kind == "zero":
        label = "zero"
        out = block_forward(BlockKind.RESBLOCK, x, np.zeros_like)
    else:
        kind = BlockKind(block_kind)
        label = kind.value
        residual = SignedPermutation(rng)
        out = block_forward(kind, x, residual, beta10=beta10, alpha21=alpha21)

    ratios = [
        _pooled_ratio(o, xi)
        for o, xi in zip(np.array_split(out, STDERR_BATCHES), np.array_split(x, STDERR_BATCHES))
    ]
    result = VarianceResult(
        block_kind=label,
        dimension=dimension,
        samples=samples,
        ratio=_pooled_ratio(out, x),
        stderr=float(np.std(ratios, ddof=1) / np.sqrt(STDERR_BATCHES)),
    )
    logger.info("variance %s: ratio %.4f +- %.4f", label, result.ratio, result.stderr)
    return result
