"""
SGD with Nesterov momentum and Adam.

Both step functions are pure: they read parameter/gradient dicts, update
the optimizer ``state`` dict and return new parameter arrays. Weight decay
is L2 added to the gradient.
"""

import numpy as np

from ..errors import OptimizerError
from ..models import OptimizerKind, TrainConfig

NO_DECAY_SUFFIXES = (".gamma", ".beta", ".beta10")


def _decayed_gradient(name, param, grad, weight_decay, no_decay) -> np.ndarray:
    if not np.all(np.isfinite(grad)):
        raise OptimizerError(name)
    if weight_decay and name not in no_decay:
        return grad + weight_decay * param
    return grad


def sgd_nesterov_step(
    params: dict[str, np.ndarray],
    grads: dict[str, np.ndarray],
    state: dict,
    lr: float,
    weight_decay: float = 0.0,
    momentum: float = 0.9,
    no_decay: frozenset[str] = frozenset(),
) -> dict[str, np.ndarray]:
    """
    buf <- momentum * buf + g
    p   <- p - lr * (g + momentum * buf)
    """
    buffers = state.setdefault("momentum", {})
    updated = {}
    for name, param in params.items():
        g = _decayed_gradient(name, param, grads[name], weight_decay, no_decay)
        buf = momentum * buffers.get(name, np.zeros_like(param)) + g
        buffers[name] = buf
        updated[name] = param - lr * (g + momentum * buf)
    return updated


def adam_step(
    params: dict[str, np.ndarray],
    grads: dict[str, np.ndarray],
    state: dict,
    lr: float,
    weight_decay: float = 0.0,
    betas: tuple[float, float] = (0.9, 0.999),
    eps: float = 1e-8,
    no_decay: frozenset[str] = frozenset(),
) -> dict[str, np.ndarray]:
    beta1, beta2 = betas
    state["step"] = step = state.get("step", 0) + 1
    first = state.setdefault("m", {})
    second = state.setdefault("v", {})
    updated = {}
    for name, param in params.items():
        g = _decayed_gradient(name, param, grads[name], weight_decay, no_decay)
        m = beta1 * first.get(name, np.zeros_like(param)) + (1.0 - beta1) * g
        v = beta2 * second.get(name, np.zeros_like(param)) + (1.0 - beta2) * g * g
        first[name], second[name] = m, v
        m_hat = m / (1.0 - beta1 ** step)
        v_hat = v / (1.0 - beta2 ** step)
        updated[name] = param - lr * m_hat / (np.sqrt(v_hat) + eps)
    return updated


class Optimizer:
    """Applies the configured step to a network's parameters in place."""

    def __init__(self, config: TrainConfig, network):
        self.config = config
        self.network = network
        self.state: dict = {}
        self.no_decay = frozenset(
            name for name, _ in network.named_parameters() if name.endswith(NO_DECAY_SUFFIXES)
        )

    def step(self, lr: float) -> None:
        named = self.network.named_parameters()
        params = {name: p.data for name, p in named}
        grads = {name: p.grad if p.grad is not None else np.zeros_like(p.data) for name, p in named}
        if self.config.optimizer == OptimizerKind.ADAM:
            updated = adam_step(
                params, grads, self.state, lr, self.config.weight_decay,
                self.config.betas, self.config.adam_eps, self.no_decay,
            )
        else:
            updated = sgd_nesterov_step(
                params, grads, self.state, lr, self.config.weight_decay,
                self.config.momentum, self.no_decay,
            )
        for name, p in named:
            p.data = np.asarray(updated[name], dtype=np.float64)
        self.network.clamp_beta10(*self.config.beta10_bounds)
