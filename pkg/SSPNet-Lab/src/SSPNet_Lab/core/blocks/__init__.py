"""
SSP residual blocks and network assembly.
"""

from .combinators import (
    RalstonCoefficients,
    ark_block_forward,
    block_forward,
    midrk2_block_forward,
    ralston_coefficients,
    res_block_forward,
    ssp2_block_forward,
    ssp3_block_forward,
)
from .layers import Block, ExpansionBlock, Linear, ResidualFunction, norm_groups, resblock_e_forward
from .network import Network, build_network, network_forward
from .convergence import ConvergenceResult, convergence_study
from .gradcheck import GRADIENT_FLOOR, GradcheckResult, check_network_gradients, small_network_spec
