"""
Differentiable primitives.

Elementwise ops take equal shapes or a single-element operand; a
single-element tensor operand receives the summed gradient.
"""

import numpy as np

from ..errors import LabelError, ShapeError
from .tensor import Tensor


def _lift(value) -> Tensor:
    return value if isinstance(value, Tensor) else Tensor(value)


def _check_pair(a: Tensor, b: Tensor, op: str) -> None:
    if a.shape != b.shape and a.size != 1 and b.size != 1:
        raise ShapeError(f"{op}: shape mismatch {a.shape} vs {b.shape}")


def _reduce_to(grad: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    if grad.shape == shape:
        return grad
    return np.full(shape, grad.sum())


def add(a, b) -> Tensor:
    a, b = _lift(a), _lift(b)
    _check_pair(a, b, "add")

    def backward(g):
        return _reduce_to(g, a.shape), _reduce_to(g, b.shape)

    return Tensor.from_op(a.data + b.data, (a, b), backward)


def sub(a, b) -> Tensor:
    a, b = _lift(a), _lift(b)
    _check_pair(a, b, "sub")

    def backward(g):
        return _reduce_to(g, a.shape), _reduce_to(-g, b.shape)

    return Tensor.from_op(a.data - b.data, (a, b), backward)


def mul(a, b) -> Tensor:
    if not isinstance(b, Tensor) and np.ndim(b) == 0:
        return scale(_lift(a), b)
    if not isinstance(a, Tensor) and np.ndim(a) == 0:
        return scale(b, a)
    a, b = _lift(a), _lift(b)
    _check_pair(a, b, "mul")

    def backward(g):
        return _reduce_to(g * b.data, a.shape), _reduce_to(g * a.data, b.shape)

    return Tensor.from_op(a.data * b.data, (a, b), backward)


def scale(a: Tensor, factor: float) -> Tensor:
    factor = float(factor)

    def backward(g):
        return (g * factor,)

    return Tensor.from_op(a.data * factor, (a,), backward)


_ELEMENTWISE = {"add": add, "sub": sub, "mul": mul}


def elementwise(op: str, a: Tensor, b) -> Tensor:
    if op == "scale":
        return scale(a, b)
    try:
        return _ELEMENTWISE[op](a, b)
    except KeyError:
        raise ValueError(f"unknown elementwise op '{op}'") from None


def reciprocal(a: Tensor) -> Tensor:
    out = 1.0 / a.data

    def backward(g):
        return (-g * out * out,)

    return Tensor.from_op(out, (a,), backward)


def sum(a: Tensor) -> Tensor:
    def backward(g):
        return (np.broadcast_to(g, a.shape).copy(),)

    return Tensor.from_op(np.asarray(a.data.sum()), (a,), backward)


def mean(a: Tensor) -> Tensor:
    n = a.size

    def backward(g):
        return (np.broadcast_to(g / n, a.shape).copy(),)

    return Tensor.from_op(np.asarray(a.data.mean()), (a,), backward)


def reshape(a: Tensor, shape: tuple[int, ...]) -> Tensor:
    def backward(g):
        return (g.reshape(a.shape),)

    return Tensor.from_op(a.data.reshape(shape), (a,), backward)


def relu(x: Tensor) -> Tensor:
    mask = x.data > 0

    def backward(g):
        return (g * mask,)

    return Tensor.from_op(np.where(mask, x.data, 0.0), (x,), backward)


def _logistic(v: np.ndarray) -> np.ndarray:
    out = np.empty_like(v)
    positive = v >= 0
    out[positive] = 1.0 / (1.0 + np.exp(-v[positive]))
    e = np.exp(v[~positive])
    out[~positive] = e / (1.0 + e)
    return out


def sigmoid(x: Tensor) -> Tensor:
    s = _logistic(x.data)

    def backward(g):
        return (g * s * (1.0 - s),)

    return Tensor.from_op(s, (x,), backward)


def dense(x: Tensor, w: Tensor, b: Tensor | None = None) -> Tensor:
    """Affine map xW + b for x of shape (batch, in)."""
    if x.ndim != 2 or w.ndim != 2 or x.shape[1] != w.shape[0]:
        raise ShapeError(f"dense: cannot multiply {x.shape} by {w.shape}")
    if b is not None and b.shape != (w.shape[1],):
        raise ShapeError(f"dense: bias shape {b.shape} does not match {w.shape[1]} outputs")
    out = x.data @ w.data
    if b is not None:
        out = out + b.data

    def backward(g):
        grads = [g @ w.data.T, x.data.T @ g]
        if b is not None:
            grads.append(g.sum(axis=0))
        return grads

    parents = (x, w) if b is None else (x, w, b)
    return Tensor.from_op(out, parents, backward)


def conv2d(x: Tensor, k: Tensor, stride: int = 1, same_padding: bool = True) -> Tensor:
    """
    Cross-correlation of (batch, c_in, h, w) with (c_out, c_in, kh, kw).
    With same padding the output is ceil(h / stride) by ceil(w / stride).
    """
    if x.ndim != 4 or k.ndim != 4:
        raise ShapeError(f"conv2d: expected 4-d input and kernel, got {x.shape} and {k.shape}")
    batch, channels, height, width = x.shape
    c_out, c_in, kh, kw = k.shape
    if channels != c_in:
        raise ShapeError(f"conv2d: input has {channels} channels, kernel expects {c_in}")
    if stride < 1:
        raise ShapeError(f"conv2d: stride must be >= 1, got {stride}")
    if same_padding and (kh % 2 == 0 or kw % 2 == 0):
        raise ShapeError(f"conv2d: same padding needs odd kernel sizes, got {kh}x{kw}")
    ph, pw = (kh // 2, kw // 2) if same_padding else (0, 0)
    padded = np.pad(x.data, ((0, 0), (0, 0), (ph, ph), (pw, pw)))
    out_h = (height + 2 * ph - kh) // stride + 1
    out_w = (width + 2 * pw - kw) // stride + 1

    def window(i: int, j: int) -> tuple[slice, slice, slice, slice]:
        return (
            slice(None),
            slice(None),
            slice(i, i + stride * (out_h - 1) + 1, stride),
            slice(j, j + stride * (out_w - 1) + 1, stride),
        )

    out = np.zeros((batch, out_h, out_w, c_out))
    for i in range(kh):
        for j in range(kw):
            out += np.tensordot(padded[window(i, j)], k.data[:, :, i, j], axes=([1], [1]))
    out = out.transpose(0, 3, 1, 2)

    def backward(g):
        grad_padded = np.zeros_like(padded)
        grad_k = np.zeros_like(k.data)
        for i in range(kh):
            for j in range(kw):
                patch = padded[window(i, j)]
                grad_k[:, :, i, j] = np.tensordot(g, patch, axes=([0, 2, 3], [0, 2, 3]))
                grad_padded[window(i, j)] += np.tensordot(
                    g, k.data[:, :, i, j], axes=([1], [0])
                ).transpose(0, 3, 1, 2)
        return grad_padded[:, :, ph:ph + height, pw:pw + width], grad_k

    return Tensor.from_op(np.ascontiguousarray(out), (x, k), backward)


def group_norm(
    x: Tensor,
    groups: int,
    gamma: Tensor | None = None,
    beta: Tensor | None = None,
    eps: float = 1e-5,
) -> Tensor:
    """Per-(sample, group) standardization followed by a per-channel affine map."""
    if x.ndim < 2:
        raise ShapeError(f"group_norm: need (batch, channels, ...), got {x.shape}")
    if eps <= 0:
        raise ValueError(f"group_norm: eps must be positive, got {eps}")
    batch, channels = x.shape[:2]
    if groups < 1 or channels % groups:
        raise ShapeError(f"group_norm: {channels} channels not divisible into {groups} groups")
    gamma = gamma if gamma is not None else Tensor(np.ones(channels))
    beta = beta if beta is not None else Tensor(np.zeros(channels))
    param_shape = (1, channels) + (1,) * (x.ndim - 2)
    reduce_axes = (0,) + tuple(range(2, x.ndim))

    grouped = x.data.reshape(batch, groups, -1)
    centered = grouped - grouped.mean(axis=2, keepdims=True)
    inv_std = 1.0 / np.sqrt((centered * centered).mean(axis=2, keepdims=True) + eps)
    x_hat = centered * inv_std
    x_hat_full = x_hat.reshape(x.shape)
    out = x_hat_full * gamma.data.reshape(param_shape) + beta.data.reshape(param_shape)

    def backward(g):
        grad_gamma = (g * x_hat_full).sum(axis=reduce_axes)
        grad_beta = g.sum(axis=reduce_axes)
        g_hat = (g * gamma.data.reshape(param_shape)).reshape(batch, groups, -1)
        grad_x = inv_std * (
            g_hat
            - g_hat.mean(axis=2, keepdims=True)
            - x_hat * (g_hat * x_hat).mean(axis=2, keepdims=True)
        )
        return grad_x.reshape(x.shape), grad_gamma, grad_beta

    return Tensor.from_op(out, (x, gamma, beta), backward)


def global_avg_pool(x: Tensor) -> Tensor:
    """Mean over spatial axes; 2-d inputs pass through."""
    if x.ndim == 2:
        return x
    if x.ndim != 4:
        raise ShapeError(f"global_avg_pool: expected 2-d or 4-d input, got {x.shape}")
    area = x.shape[2] * x.shape[3]

    def backward(g):
        return (np.broadcast_to(g[:, :, None, None] / area, x.shape).copy(),)

    return Tensor.from_op(x.data.mean(axis=(2, 3)), (x,), backward)


def softmax_cross_entropy(logits: Tensor, labels, reduction: str = "mean") -> Tensor:
    """Negative log softmax probability of the true class, max-shifted."""
    if logits.ndim != 2:
        raise ShapeError(f"softmax_cross_entropy: logits must be 2-d, got {logits.shape}")
    labels = np.asarray(labels, dtype=np.int64)
    batch, classes = logits.shape
    if labels.shape != (batch,):
        raise ShapeError(f"softmax_cross_entropy: labels shape {labels.shape} does not match {batch} rows")
    if batch and (labels.min() < 0 or labels.max() >= classes):
        raise LabelError(f"labels must lie in [0, {classes})")
    if reduction not in {"mean", "sum"}:
        raise ValueError(f"unknown reduction '{reduction}'")

    shifted = logits.data - logits.data.max(axis=1, keepdims=True)
    log_probs = shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    rows = np.arange(batch)
    losses = -log_probs[rows, labels]
    divisor = batch if reduction == "mean" else 1

    def backward(g):
        grad = np.exp(log_probs)
        grad[rows, labels] -= 1.0
        return (grad * (g / divisor),)

    return Tensor.from_op(np.asarray(losses.sum() / divisor), (logits,), backward)
