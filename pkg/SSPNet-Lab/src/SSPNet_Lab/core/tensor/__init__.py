"""
Dense float64 tensors with define-by-run reverse-mode differentiation.
"""

from .tensor import Tape, Tensor, backward, is_grad_enabled, no_grad
from .ops import (
    add,
    conv2d,
    dense,
    elementwise,
    global_avg_pool,
    group_norm,
    mean,
    mul,
    relu,
    reshape,
    scale,
    sigmoid,
    softmax_cross_entropy,
    sub,
    sum,
)
from .rng import SeededRng
from .gradcheck import finite_difference_gradient, max_relative_error
