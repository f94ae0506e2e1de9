"""
Central finite differences, the oracle the tape is checked against.
"""

from typing import Callable

import numpy as np

from .tensor import Tensor, no_grad


def _evaluate(f: Callable[[Tensor], "Tensor | float"], x: Tensor) -> float:
    value = f(x)
    return value.item() if isinstance(value, Tensor) else float(value)


def _central(f, x: Tensor, flat: np.ndarray, i: int, h: float) -> float:
    original = flat[i]
    flat[i] = original + h
    upper = _evaluate(f, x)
    flat[i] = original - h
    lower = _evaluate(f, x)
    flat[i] = original
    return (upper - lower) / (2.0 * h)


def finite_difference_gradient(
    f: Callable[[Tensor], "Tensor | float"],
    x: Tensor,
    h: float = 1e-5,
    richardson: bool = False,
) -> Tensor:
    """
    Per-coordinate (f(x + h e_i) - f(x - h e_i)) / 2h, perturbing x in place.

    With ``richardson`` the estimate is (4 D(h/2) - D(h)) / 3, which cancels
    the h^2 truncation term.
    """
    if h <= 0:
        raise ValueError(f"step h must be positive, got {h}")
    if not x.data.flags.c_contiguous:
        x.data = np.ascontiguousarray(x.data)
    flat = x.data.reshape(-1)
    grad = np.empty(flat.size)
    with no_grad():
        for i in range(flat.size):
            estimate = _central(f, x, flat, i, h)
            if richardson:
                estimate = (4.0 * _central(f, x, flat, i, h / 2.0) - estimate) / 3.0
            grad[i] = estimate
    return Tensor(grad.reshape(x.shape))


def max_relative_error(analytic: np.ndarray, numeric: np.ndarray, floor: float = 1e-8) -> float:
    """max_i |a_i - n_i| / (|n_i| + floor)"""
    analytic = np.asarray(analytic, dtype=np.float64).reshape(-1)
    numeric = np.asarray(numeric, dtype=np.float64).reshape(-1)
    if analytic.size == 0:
        return 0.0
    return float(np.max(np.abs(analytic - numeric) / (np.abs(numeric) + floor)))
