"""Differentiable primitives.

Shapes must match exactly. The only implicit broadcasts are a scalar
(shape ()) against a tensor in `add`/`sub`/`mul`, and the bias row of `affine`.
Masks are boolean arrays covering the leading axes of their operand
(mask.shape == x.shape[:mask.ndim]); masked entries read as 0 and get no gradient.
"""

from __future__ import annotations

import threading
from collections.abc import Callable, Iterator, Sequence
from contextlib import contextmanager

import numpy as np

from gnnlab.autodiff.tensor import Tensor, emit
from gnnlab.errors import InputError


def _as_tensor(x) -> Tensor:
    return x if isinstance(x, Tensor) else Tensor(x)


def _binary_shapes(a: Tensor, b: Tensor, op: str) -> None:
    if a.shape != b.shape and a.shape != () and b.shape != ():
        raise InputError(f"{op}: shape mismatch {a.shape} vs {b.shape}")


def _unbroadcast(g: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    return np.asarray(g.sum()) if shape == () and g.shape != () else g


def _expand_mask(mask: np.ndarray, x: np.ndarray) -> np.ndarray:
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != x.shape[: mask.ndim]:
        raise InputError(f"mask shape {mask.shape} does not cover leading axes of {x.shape}")
    return mask.reshape(mask.shape + (1,) * (x.ndim - mask.ndim))


def add(a, b) -> Tensor:
    a, b = _as_tensor(a), _as_tensor(b)
    _binary_shapes(a, b, "add")
    return emit(
        a.data + b.data,
        (a, b),
        lambda g: (_unbroadcast(g, a.shape), _unbroadcast(g, b.shape)),
    )


def sub(a, b) -> Tensor:
    a, b = _as_tensor(a), _as_tensor(b)
    _binary_shapes(a, b, "sub")
    return emit(
        a.data - b.data,
        (a, b),
        lambda g: (_unbroadcast(g, a.shape), _unbroadcast(-g, b.shape)),
    )


def mul(a, b) -> Tensor:
    """Hadamard product."""
    a, b = _as_tensor(a), _as_tensor(b)
    _binary_shapes(a, b, "mul")
    return emit(
        a.data * b.data,
        (a, b),
        lambda g: (_unbroadcast(g * b.data, a.shape), _unbroadcast(g * a.data, b.shape)),
    )


def scale(x: Tensor, c: float) -> Tensor:
    return emit(x.data * c, (x,), lambda g: (g * c,))


def matmul(a: Tensor, b: Tensor) -> Tensor:
    """Matrix product over the last two axes; leading (batch) axes must agree."""
    if a.ndim < 2 or a.ndim != b.ndim:
        raise InputError(f"matmul: need equal-rank operands of rank >= 2, got {a.shape}, {b.shape}")
    if a.shape[:-2] != b.shape[:-2] or a.shape[-1] != b.shape[-2]:
        raise InputError(f"matmul: incompatible shapes {a.shape} and {b.shape}")

    def back(g):
        return g @ np.swapaxes(b.data, -1, -2), np.swapaxes(a.data, -1, -2) @ g

    return emit(a.data @ b.data, (a, b), back)


def affine(x: Tensor, W: Tensor, b: Tensor | None = None) -> Tensor:
    """x @ W + b applied to the last axis of x."""
    if W.ndim != 2 or x.ndim < 1 or x.shape[-1] != W.shape[0]:
        raise InputError(f"affine: input {x.shape} does not match weight {W.shape}")
    if b is not None and b.shape != (W.shape[1],):
        raise InputError(f"affine: bias {b.shape} does not match weight {W.shape}")
    flat = x.data.reshape(-1, W.shape[0])
    out = flat @ W.data
    if b is not None:
        out = out + b.data
    out = out.reshape(x.shape[:-1] + (W.shape[1],))

    def back(g):
        g2 = g.reshape(-1, W.shape[1])
        gx = (g2 @ W.data.T).reshape(x.shape)
        gw = flat.T @ g2
        return (gx, gw) if b is None else (gx, gw, g2.sum(axis=0))

    inputs = (x, W) if b is None else (x, W, b)
    return emit(out, inputs, back)


_patterns = threading.local()


def _pattern_logs() -> list[list[np.ndarray]]:
    if not hasattr(_patterns, "logs"):
        _patterns.logs = []
    return _patterns.logs


@contextmanager
def recording_relu_patterns() -> Iterator[list[np.ndarray]]:
    """Collect the activation pattern (x > 0) of every relu applied inside the block."""
    patterns: list[np.ndarray] = []
    _pattern_logs().append(patterns)
    try:
        yield patterns
    finally:
        _pattern_logs().pop()


def relu(x: Tensor) -> Tensor:
    positive = x.data > 0
    for patterns in _pattern_logs():
        patterns.append(positive)
    return emit(np.where(positive, x.data, 0.0), (x,), lambda g: (g * positive,))


def log(x: Tensor) -> Tensor:
    return emit(np.log(x.data), (x,), lambda g: (g / x.data,))


def _row_stats(x: np.ndarray, mask: np.ndarray | None) -> tuple[np.ndarray, np.ndarray]:
    """Masked, shifted exponentials and their row sums over the last axis."""
    if mask is None:
        mask = np.ones(x.shape, dtype=bool)
    else:
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != x.shape:
            raise InputError(f"softmax mask {mask.shape} must match input {x.shape}")
    if not mask.any(axis=-1).all():
        raise InputError("softmax over a row with no unmasked entries")
    shifted = np.where(mask, x, -np.inf)
    shifted = shifted - shifted.max(axis=-1, keepdims=True)
    ex = np.where(mask, np.exp(shifted), 0.0)
    return ex, ex.sum(axis=-1, keepdims=True)


def row_softmax(x: Tensor, mask: np.ndarray | None = None) -> Tensor:
    """Softmax along the last axis over unmasked entries; masked entries are 0."""
    ex, total = _row_stats(x.data, mask)
    p = ex / total

    def back(g):
        return (p * (g - (g * p).sum(axis=-1, keepdims=True)),)

    return emit(p, (x,), back)


def row_log_softmax(x: Tensor, mask: np.ndarray | None = None) -> Tensor:
    """log(row_softmax(x)), computed stably; masked entries are 0."""
    ex, total = _row_stats(x.data, mask)
    valid = np.ones(x.shape, dtype=bool) if mask is None else np.asarray(mask, dtype=bool)
    m = np.where(valid, x.data, -np.inf).max(axis=-1, keepdims=True)
    out = np.where(valid, x.data - m - np.log(total), 0.0)
    p = ex / total

    def back(g):
        g = np.where(valid, g, 0.0)
        return (g - p * g.sum(axis=-1, keepdims=True),)

    return emit(out, (x,), back)


def reduce_sum(x: Tensor, axes: int | Sequence[int] | None = None, mask=None) -> Tensor:
    if axes is None:
        axes = tuple(range(x.ndim))
    elif isinstance(axes, int):
        axes = (axes,)
    axes = tuple(a % x.ndim for a in axes)
    m = None if mask is None else _expand_mask(mask, x.data)
    src = x.data if m is None else np.where(m, x.data, 0.0)

    def back(g):
        gx = np.broadcast_to(np.expand_dims(g, axes), x.shape)
        return (gx * m if m is not None else np.array(gx),)

    return emit(src.sum(axis=axes), (x,), back)


def apply_mask(x: Tensor, mask: np.ndarray) -> Tensor:
    """Zero the masked-out entries of x."""
    m = _expand_mask(mask, x.data)
    return emit(np.where(m, x.data, 0.0), (x,), lambda g: (g * m,))


def concat(tensors: Sequence[Tensor], axis: int = -1) -> Tensor:
    """Concatenate along the last axis."""
    if axis not in (-1, tensors[0].ndim - 1):
        raise InputError("concat only joins along the last axis")
    lead = tensors[0].shape[:-1]
    if any(t.shape[:-1] != lead for t in tensors):
        raise InputError(f"concat: leading shapes differ {[t.shape for t in tensors]}")
    bounds = np.cumsum([t.shape[-1] for t in tensors])[:-1]

    def back(g):
        return tuple(np.split(g, bounds, axis=-1))

    return emit(np.concatenate([t.data for t in tensors], axis=-1), tuple(tensors), back)


def transpose(x: Tensor) -> Tensor:
    if x.ndim != 2:
        raise InputError(f"transpose needs a 2-D tensor, got shape {x.shape}")
    return emit(x.data.T.copy(), (x,), lambda g: (g.T,))


def permute_axes(x: Tensor, order: Sequence[int]) -> Tensor:
    order = tuple(order)
    inverse = tuple(np.argsort(order))
    return emit(
        np.ascontiguousarray(np.transpose(x.data, order)),
        (x,),
        lambda g: (np.transpose(g, inverse),),
    )


def reshape(x: Tensor, shape: Sequence[int]) -> Tensor:
    return emit(x.data.reshape(tuple(shape)), (x,), lambda g: (g.reshape(x.shape),))


def expand(x: Tensor, axis: int, size: int) -> Tensor:
    """Insert a new axis at `axis` and repeat x `size` times along it."""
    out = np.repeat(np.expand_dims(x.data, axis), size, axis=axis)
    return emit(out, (x,), lambda g: (g.sum(axis=axis),))


def linear_map(
    x: Tensor,
    forward: Callable[[np.ndarray], np.ndarray],
    adjoint: Callable[[np.ndarray], np.ndarray],
) -> Tensor:
    """A fixed linear operator given by its action and its adjoint."""
    return emit(forward(x.data), (x,), lambda g: (adjoint(g),))
