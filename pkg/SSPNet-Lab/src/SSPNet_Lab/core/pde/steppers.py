"""
One time step of each scheme. The SSP, mid-RK2 and Ark steppers reuse
the network block combinators with F(v) = dt * L(v).
"""

import logging
from typing import Callable

import numpy as np

from ..blocks import block_forward
from ..errors import SchemeError
from ..models import BlockKind, SchemeKind

logger = logging.getLogger(__name__)

Rhs = Callable[[np.ndarray], np.ndarray]

_BLOCK_FOR_SCHEME = {
    SchemeKind.EULER: BlockKind.RESBLOCK,
    SchemeKind.SSP2: BlockKind.SSP2,
    SchemeKind.SSP3: BlockKind.SSP3,
    SchemeKind.MIDRK2: BlockKind.MIDRK2,
    SchemeKind.ARK: BlockKind.ARK,
}

# Shu-Osher stage weights on previous stages; each row sums to 1.
STAGE_WEIGHTS = {
    SchemeKind.EULER: ((1.0,),),
    SchemeKind.SSP2: ((1.0,), (0.5, 0.5)),
    SchemeKind.SSP3: ((1.0,), (0.75, 0.25), (1.0 / 3.0, 2.0 / 3.0)),
}


def _finite(values: np.ndarray, kind: SchemeKind) -> np.ndarray:
    if not np.all(np.isfinite(values)):
        raise SchemeError(f"{kind.value}: non-finite stage value")
    return values


def nontvd2_step(u: np.ndarray, dt: float, rhs: Rhs) -> np.ndarray:
    """
    u1     = u - 20 dt L(u)
    u_next = u + 41/40 dt L(u) - 1/40 dt L(u1)
    """
    lu = _finite(rhs(u), SchemeKind.NONTVD2)
    u1 = _finite(u - 20.0 * dt * lu, SchemeKind.NONTVD2)
    lu1 = _finite(rhs(u1), SchemeKind.NONTVD2)
    return u + (41.0 / 40.0) * dt * lu - (1.0 / 40.0) * dt * lu1


def step(
    kind: SchemeKind | str,
    u: np.ndarray,
    dt: float,
    rhs: Rhs,
    beta10: float = 1.0,
    alpha21: float = 0.5,
) -> np.ndarray:
    kind = SchemeKind(kind)
    if dt <= 0:
        raise SchemeError(f"dt must be positive, got {dt}")
    u = np.asarray(u, dtype=np.float64)
    if kind == SchemeKind.NONTVD2:
        return _finite(nontvd2_step(u, dt, rhs), kind)

    def F(v):
        return dt * _finite(rhs(_finite(v, kind)), kind)

    out = block_forward(_BLOCK_FOR_SCHEME[kind], u, F, beta10=beta10, alpha21=alpha21)
    return _finite(out, kind)
