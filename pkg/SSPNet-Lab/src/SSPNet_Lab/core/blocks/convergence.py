"""
Order-of-accuracy study on the linear test equation u' = lam * u.
"""

from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from ..models import BlockKind
from .combinators import block_forward

DEFAULT_DTS = (1 / 8, 1 / 16, 1 / 32, 1 / 64)


@dataclass
class ConvergenceResult:
    errors: dict[str, list[float]] = field(default_factory=dict)
    slopes: dict[str, float] = field(default_factory=dict)
    dts: tuple[float, ...] = DEFAULT_DTS

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {"kind": kind, "dt": dt, "error": err, "slope": self.slopes[kind]}
            for kind, errs in self.errors.items()
            for dt, err in zip(self.dts, errs)
        ]
        return pd.DataFrame(rows, columns=["kind", "dt", "error", "slope"])


def integrate_linear(kind: BlockKind, lam: float, t_final: float, dt: float,
                     u0: float = 1.0, beta10: float = 1.0, alpha21: float = 0.5) -> float:
    steps = int(round(t_final / dt))
    u = u0
    for _ in range(steps):
        u = block_forward(kind, u, lambda v: dt * lam * v, beta10=beta10, alpha21=alpha21)
    return u


def convergence_study(
    kinds=tuple(BlockKind),
    lam: float = -1.0,
    t_final: float = 1.0,
    dts=DEFAULT_DTS,
    beta10: float = 1.0,
    alpha21: float = 0.5,
) -> ConvergenceResult:
    """Global error at t_final per step size, and the fitted log-log slope."""
    exact = float(np.exp(lam * t_final))
    result = ConvergenceResult(dts=tuple(dts))
    for kind in kinds:
        kind = BlockKind(kind)
        errors = [
            abs(integrate_linear(kind, lam, t_final, dt, beta10=beta10, alpha21=alpha21) - exact)
            for dt in dts
        ]
        slope = np.polyfit(np.log(dts), np.log(errors), 1)[0]
        result.errors[kind.value] = errors
        result.slopes[kind.value] = float(slope)
    return result
