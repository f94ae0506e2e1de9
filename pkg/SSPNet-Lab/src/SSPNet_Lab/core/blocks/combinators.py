"""
Residual block combinators: ResBlock, SSP2, SSP3, mid-RK2 and Ark.

Every combinator takes a state ``x`` and a residual function ``F`` and
works for numpy arrays, floats and Tensors alike, so the same definitions
drive network blocks, the ODE order study and the Burgers' time steppers.
The step size is folded into F (networks use dt = 1).

Stages are written as increments of x, so F == 0 returns x bit-exactly.
"""

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import BlockError, ShapeError
from ..models import BlockKind

logger = logging.getLogger(__name__)

ResidualFn = Callable[[object], object]


def _apply(F: ResidualFn, x):
    fx = F(x)
    if np.shape(fx) != np.shape(x):
        raise ShapeError(f"residual function changed shape {np.shape(x)} -> {np.shape(fx)}")
    return fx


def res_block_forward(x, F: ResidualFn):
    """y = x + F(x)"""
    return x + _apply(F, x)


def ssp2_block_forward(x, F: ResidualFn):
    """
    x_half = x + F(x)
    y      = 1/2 x + 1/2 x_half + 1/2 F(x_half)
    """
    x_half = x + _apply(F, x)
    return x + 0.5 * ((x_half - x) + _apply(F, x_half))


def ssp3_block_forward(x, F: ResidualFn):
    """
    x_1 = x + F(x)
    x_2 = 3/4 x + 1/4 x_1 + 1/4 F(x_1)
    y   = 1/3 x + 2/3 x_2 + 2/3 F(x_2)
    """
    x_1 = x + _apply(F, x)
    x_2 = x + 0.25 * ((x_1 - x) + _apply(F, x_1))
    return x + (2.0 / 3.0) * ((x_2 - x) + _apply(F, x_2))


def midrk2_block_forward(x, F: ResidualFn):
    """y = x + F(x + 1/2 F(x)); not SSP."""
    return x + _apply(F, x + 0.5 * _apply(F, x))


@dataclass(frozen=True)
class RalstonCoefficients:
    alpha20: float
    beta20: object  # float, or Tensor when beta10 is learnable
    beta21: object
    ssp_sufficient: bool


def ralston_coefficients(beta10, alpha21: float) -> RalstonCoefficients:
    """
    Second-order two-stage coefficients with alpha10 = 1:
        alpha20 = 1 - alpha21
        beta21  = 1 / (2 beta10)
        beta20  = 1 - 1 / (2 beta10) - alpha21 beta10
    ``ssp_sufficient`` reports non-negativity of all Shu-Osher coefficients.
    """
    b10 = float(beta10)
    if b10 == 0.0:
        raise BlockError("beta10 must be non-zero")
    alpha21 = float(alpha21)
    alpha20 = 1.0 - alpha21
    beta21 = 1.0 / (2.0 * beta10)
    beta20 = 1.0 - beta21 - alpha21 * beta10
    ssp_sufficient = (
        b10 >= 0
        and float(beta20) >= 0
        and float(beta21) >= 0
        and alpha20 >= 0
        and alpha21 >= 0
    )
    return RalstonCoefficients(alpha20, beta20, beta21, ssp_sufficient)


def ark_block_forward(x, F: ResidualFn, beta10, alpha21: float = 0.5):
    """
    x_half = x + beta10 F(x)
    y      = alpha20 x + beta20 F(x) + alpha21 x_half + beta21 F(x_half)

    beta10 may be a Tensor, in which case it takes part in the tape.
    """
    coefficients = ralston_coefficients(beta10, alpha21)
    fx = _apply(F, x)
    x_half = x + beta10 * fx
    # alpha20 x + alpha21 x_half == x + alpha21 (x_half - x)
    return (
        x
        + coefficients.beta20 * fx
        + float(alpha21) * (x_half - x)
        + coefficients.beta21 * _apply(F, x_half)
    )


def block_forward(kind: BlockKind, x, F: ResidualFn, beta10=1.0, alpha21: float = 0.5):
    kind = BlockKind(kind)
    if kind == BlockKind.RESBLOCK:
        return res_block_forward(x, F)
    if kind == BlockKind.SSP2:
        return ssp2_block_forward(x, F)
    if kind == BlockKind.SSP3:
        return ssp3_block_forward(x, F)
    if kind == BlockKind.MIDRK2:
        return midrk2_block_forward(x, F)
    return ark_block_forward(x, F, beta10, alpha21)
