"""
Step-function Riemann problem for the inviscid Burgers' equation, with
total variation recorded after every step.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from ..metrics import total_variation
from ..models import BurgersState, Grid, SchemeSpec
from .steppers import step
from .weno import step_ic, weno3_rhs

logger = logging.getLogger(__name__)

BLOW_UP = 1e6


@dataclass
class BurgersRun:
    spec: SchemeSpec
    grid: Grid
    times: list[float] = field(default_factory=list)
    trajectory: list[np.ndarray] = field(default_factory=list)
    tv: list[float] = field(default_factory=list)
    blew_up: bool = False
    filtered: np.ndarray | None = None

    @property
    def final(self) -> np.ndarray:
        return self.trajectory[-1]

    @property
    def final_state(self) -> BurgersState:
        return BurgersState(self.trajectory[-1], self.times[-1])

    def tv_increments(self) -> np.ndarray:
        return np.diff(np.asarray(self.tv))


def sigmoid_filter(u: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * np.asarray(u, dtype=np.float64)))


def mass(u: np.ndarray, grid: Grid) -> float:
    """sum_j u_j dx"""
    return float(np.sum(u) * grid.dx)


def cfl_number(u: np.ndarray, dt: float, grid: Grid) -> float:
    return float(np.max(np.abs(u)) * dt / grid.dx)


def run_burgers(spec: SchemeSpec, grid: Grid | None = None, sigmoid: bool = False) -> BurgersRun:
    """
    Integrate from the step initial condition to ``spec.t_final``. The
    last step is shortened to land on t_final. A state exceeding 1e6 in
    magnitude stops the run with ``blew_up`` set.
    """
    grid = grid or Grid(spec.n)
    u = step_ic(grid)
    t = 0.0
    run = BurgersRun(spec, grid, [t], [u], [total_variation(u, periodic=True)])

    courant = cfl_number(u, spec.dt, grid)
    if courant > 1.0:
        logger.warning("CFL number %.3f exceeds the forward-Euler limit 1", courant)

    def rhs(v):
        return weno3_rhs(v, grid)

    n = 0
    while t < spec.t_final - 1e-12 * max(1.0, spec.t_final):
        dt = min(spec.dt, spec.t_final - t)
        u = step(spec.kind, u, dt, rhs, spec.beta10, spec.alpha21)
        t += dt
        n += 1
        run.times.append(t)
        run.trajectory.append(u)
        run.tv.append(total_variation(u, periodic=True))
        logger.debug("step %d t=%.5f TV=%.6f", n, t, run.tv[-1])
        if np.max(np.abs(u)) > BLOW_UP:
            run.blew_up = True
            logger.warning("%s blew up at step %d (t=%.5f)", spec.kind.value, n, t)
            break

    if sigmoid:
        run.filtered = sigmoid_filter(u)
    logger.info(
        "%s: %d steps to t=%.4f, max TV %.4f", spec.kind.value, n, t, max(run.tv)
    )
    return run
