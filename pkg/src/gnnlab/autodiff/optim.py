"""Adam with bias correction."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np

from gnnlab.autodiff.tensor import Tensor
from gnnlab.config import settings
from gnnlab.errors import InputError


@dataclass
class AdamState:
    lr: float = field(default_factory=lambda: settings.learning_rate)
    beta1: float = field(default_factory=lambda: settings.adam_beta1)
    beta2: float = field(default_factory=lambda: settings.adam_beta2)
    eps: float = field(default_factory=lambda: settings.adam_eps)
    t: int = 0
    m: dict[str, np.ndarray] = field(default_factory=dict)
    v: dict[str, np.ndarray] = field(default_factory=dict)


def adam_step(
    params: Mapping[str, Tensor],
    grads: Mapping[str, np.ndarray],
    state: AdamState,
) -> tuple[dict[str, Tensor], AdamState]:
    """One Adam update. Returns new parameter tensors and a new state."""
    t = state.t + 1
    new_params: dict[str, Tensor] = {}
    m_out: dict[str, np.ndarray] = {}
    v_out: dict[str, np.ndarray] = {}
    for name, p in params.items():
        g = grads[name]
        if g.shape != p.shape:
            raise InputError(f"gradient for {name} has shape {g.shape}, parameter {p.shape}")
        m = state.m.get(name, np.zeros_like(p.data))
        v = state.v.get(name, np.zeros_like(p.data))
        m = state.beta1 * m + (1.0 - state.beta1) * g
        v = state.beta2 * v + (1.0 - state.beta2) * g * g
        m_hat = m / (1.0 - state.beta1**t)
        v_hat = v / (1.0 - state.beta2**t)
        update = state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
        new_params[name] = Tensor(p.data - update, requires_grad=True, name=name)
        m_out[name], v_out[name] = m, v
    new_state = AdamState(
        lr=state.lr,
        beta1=state.beta1,
        beta2=state.beta2,
        eps=state.eps,
        t=t,
        m=m_out,
        v=v_out,
    )
    return new_params, new_state
