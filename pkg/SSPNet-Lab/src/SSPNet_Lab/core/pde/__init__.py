"""
Burgers' equation lab: WENO3 right side, time steppers and TV monitoring.
"""

from .weno import WENO_EPSILON, burgers_flux, interface_flux, reconstruct_minus, reconstruct_plus, step_ic, weno3_rhs
from .steppers import STAGE_WEIGHTS, nontvd2_step, step
from .burgers import BLOW_UP, BurgersRun, cfl_number, mass, run_burgers, sigmoid_filter
