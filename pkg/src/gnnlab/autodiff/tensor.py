"""Dense double-precision tensors and the recording tape.

A primitive applied while a `Tape` is active, to at least one input that
requires a gradient, appends a node holding its inputs and a backward rule.
`backward` walks those nodes once, in reverse recording order.
"""

from __future__ import annotations

import itertools
import threading
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from gnnlab.errors import InputError

_uids = itertools.count()
_local = threading.local()

BackwardFn = Callable[[np.ndarray], Sequence[np.ndarray | None]]


class Tensor:
    __slots__ = ("data", "requires_grad", "name", "uid")

    def __init__(self, data, requires_grad: bool = False, name: str = ""):
        self.data = np.asarray(data, dtype=np.float64)
        self.requires_grad = requires_grad
        self.name = name
        self.uid = next(_uids)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def size(self) -> int:
        return int(self.data.size)

    def item(self) -> float:
        if self.size != 1:
            raise InputError(f"item() needs a single-element tensor, got shape {self.shape}")
        return float(self.data.reshape(()))

    def numpy(self) -> np.ndarray:
        return self.data

    def detach(self) -> Tensor:
        return Tensor(self.data)

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"Tensor{label}(shape={self.shape}, requires_grad={self.requires_grad})"


def parameter(data, name: str = "") -> Tensor:
    return Tensor(data, requires_grad=True, name=name)


@dataclass
class TapeNode:
    output_uid: int
    inputs: tuple[Tensor, ...]
    backward: BackwardFn


class Tape:
    """Records primitive applications; use as a context manager."""

    def __init__(self):
        self.nodes: list[TapeNode] = []
        self._recorded: set[int] = set()

    def __enter__(self) -> Tape:
        _stack().append(self)
        return self

    def __exit__(self, *exc) -> None:
        _stack().pop()

    def record(self, output: Tensor, inputs: tuple[Tensor, ...], fn: BackwardFn) -> None:
        self.nodes.append(TapeNode(output.uid, inputs, fn))
        self._recorded.add(output.uid)

    def __contains__(self, t: Tensor) -> bool:
        return t.uid in self._recorded

    def __len__(self) -> int:
        return len(self.nodes)


def _stack() -> list[Tape]:
    if not hasattr(_local, "tapes"):
        _local.tapes = []
    return _local.tapes


def active_tape() -> Tape | None:
    stack = _stack()
    return stack[-1] if stack else None


def emit(data: np.ndarray, inputs: tuple[Tensor, ...], fn: BackwardFn) -> Tensor:
    out = Tensor(data)
    tape = active_tape()
    if tape is not None and any(t.requires_grad for t in inputs):
        out.requires_grad = True
        tape.record(out, inputs, fn)
    return out


def backward(tape: Tape, loss: Tensor, wrt: Mapping[str, Tensor]) -> dict[str, np.ndarray]:
    """Reverse-mode gradients of a scalar loss with respect to `wrt`.

    Tensors in `wrt` that the loss does not depend on get zero gradients.
    """
    if loss.size != 1:
        raise InputError(f"loss must be a scalar, got shape {loss.shape}")
    leaf_uids = {t.uid for t in wrt.values()}
    if loss not in tape and loss.uid not in leaf_uids:
        raise InputError("loss was not recorded on this tape")

    grads: dict[int, np.ndarray] = {loss.uid: np.ones_like(loss.data)}
    for node in reversed(tape.nodes):
        g = grads.get(node.output_uid)
        if g is None:
            continue
        for t, gi in zip(node.inputs, node.backward(g)):
            if gi is None or not t.requires_grad:
                continue
            if t.uid in grads:
                grads[t.uid] = grads[t.uid] + gi
            else:
                grads[t.uid] = gi
    return {name: grads.get(t.uid, np.zeros_like(t.data)) for name, t in wrt.items()}
