import numpy as np

from ..errors import ShapeError


def total_variation(u, periodic: bool = True) -> float:
    """sum_j |u_{j+1} - u_j|, plus |u_0 - u_{N-1}| when periodic."""
    u = np.asarray(u, dtype=np.float64)
    if u.ndim != 1 or u.size < 2:
        raise ShapeError(f"total variation needs a 1-d array of length >= 2, got shape {u.shape}")
    tv = np.abs(np.diff(u)).sum()
    if periodic:
        tv += abs(u[0] - u[-1])
    return float(tv)
