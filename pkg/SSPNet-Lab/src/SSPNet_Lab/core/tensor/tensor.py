"""
Tensor container and the tape that replays adjoints.

Each differentiable op builds its output through ``Tensor.from_op``, which
records the parent tensors and a closure mapping the output gradient to one
gradient per parent. The tape is rebuilt from the loss on every ``backward``.
"""

import threading
from contextlib import contextmanager
from typing import Callable, Iterator, Sequence

import numpy as np

from ..errors import GradientError, ShapeError

BackwardFn = Callable[[np.ndarray], Sequence["np.ndarray | None"]]

_state = threading.local()


def is_grad_enabled() -> bool:
    return getattr(_state, "enabled", True)


@contextmanager
def no_grad() -> Iterator[None]:
    """Suspend tape recording (evaluation-only passes)."""
    previous = is_grad_enabled()
    _state.enabled = False
    try:
        yield
    finally:
        _state.enabled = previous


def _as_array(value) -> np.ndarray:
    return np.array(value, dtype=np.float64)


class Tensor:
    # Make numpy arrays defer to the reflected Tensor operators.
    __array_ufunc__ = None

    def __init__(self, data, requires_grad: bool = False, name: str | None = None):
        self.data = _as_array(data)
        self.requires_grad = bool(requires_grad)
        self.grad: np.ndarray | None = None
        self.name = name
        self._parents: tuple["Tensor", ...] = ()
        self._backward: BackwardFn | None = None

    @classmethod
    def from_op(cls, data: np.ndarray, parents: Sequence["Tensor"], backward_fn: BackwardFn) -> "Tensor":
        out = cls.__new__(cls)
        out.data = np.asarray(data, dtype=np.float64)
        out.grad = None
        out.name = None
        out.requires_grad = is_grad_enabled() and any(p.requires_grad for p in parents)
        out._parents = tuple(parents) if out.requires_grad else ()
        out._backward = backward_fn if out.requires_grad else None
        return out

    # ---- container protocol -------------------------------------------------

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def size(self) -> int:
        return self.data.size

    @property
    def is_leaf(self) -> bool:
        return self._backward is None

    def numpy(self) -> np.ndarray:
        return self.data.copy()

    def item(self) -> float:
        if self.data.size != 1:
            raise ShapeError(f"item() needs a single element, tensor has shape {self.shape}")
        return float(self.data.reshape(()))

    def detach(self) -> "Tensor":
        return Tensor(self.data)

    def zero_grad(self) -> None:
        self.grad = None

    def __float__(self) -> float:
        return self.item()

    def __len__(self) -> int:
        return len(self.data)

    def __repr__(self) -> str:
        label = f", name={self.name!r}" if self.name else ""
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad}{label})"

    # ---- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        from .ops import add
        return add(self, other)

    def __radd__(self, other):
        from .ops import add
        return add(self, other)

    def __sub__(self, other):
        from .ops import sub
        return sub(self, other)

    def __rsub__(self, other):
        from .ops import sub
        return sub(other, self)

    def __mul__(self, other):
        from .ops import mul
        return mul(self, other)

    def __rmul__(self, other):
        from .ops import mul
        return mul(self, other)

    def __neg__(self):
        from .ops import scale
        return scale(self, -1.0)

    def __truediv__(self, other):
        from .ops import mul, reciprocal
        if isinstance(other, Tensor):
            return mul(self, reciprocal(other))
        return mul(self, 1.0 / float(other))

    def __rtruediv__(self, other):
        from .ops import mul, reciprocal
        return mul(reciprocal(self), other)

    def backward(self) -> None:
        backward(self)


class Tape:
    """Tensors reachable from a root, parents before children."""

    def __init__(self, nodes: list[Tensor]):
        self.nodes = nodes

    @classmethod
    def record(cls, root: Tensor) -> "Tape":
        order: list[Tensor] = []
        seen: set[int] = set()
        stack: list[tuple[Tensor, bool]] = [(root, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            for parent in node._parents:
                if id(parent) not in seen:
                    stack.append((parent, False))
        return cls(order)

    def replay(self, root: Tensor, seed: np.ndarray) -> dict[int, np.ndarray]:
        grads: dict[int, np.ndarray] = {id(root): seed}
        for node in reversed(self.nodes):
            grad = grads.get(id(node))
            if grad is None or node._backward is None:
                continue
            for parent, parent_grad in zip(node._parents, node._backward(grad)):
                if parent_grad is None or not parent.requires_grad:
                    continue
                key = id(parent)
                grads[key] = grads[key] + parent_grad if key in grads else parent_grad
        return grads

    def __len__(self) -> int:
        return len(self.nodes)


def backward(loss: Tensor) -> Tape:
    """
    Populate ``grad`` of every requires_grad tensor on the loss's tape.
    Gradients are overwritten, not accumulated.
    """
    if loss.data.size != 1:
        raise GradientError(f"backward needs a scalar loss, got shape {loss.shape}")
    if not loss.requires_grad:
        raise GradientError("loss is not on a gradient tape")
    tape = Tape.record(loss)
    grads = tape.replay(loss, np.ones_like(loss.data))
    for node in tape.nodes:
        if node.requires_grad:
            grad = grads.get(id(node))
            node.grad = np.zeros_like(node.data) if grad is None else np.array(grad, dtype=np.float64).reshape(node.shape)
    return tape
