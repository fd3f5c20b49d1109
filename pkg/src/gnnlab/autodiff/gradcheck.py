"""Finite-difference verification of reverse-mode gradients."""

from __future__ import annotations

from collections.abc import Callable

import numpy as np

from gnnlab.autodiff.tensor import Tape, Tensor, backward


def _central(f: Callable[[Tensor], Tensor], base: np.ndarray, i: int, eps: float) -> float:
    plus = base.copy().reshape(-1)
    minus = base.copy().reshape(-1)
    plus[i] += eps
    minus[i] -= eps
    f_plus = f(Tensor(plus.reshape(base.shape))).item()
    f_minus = f(Tensor(minus.reshape(base.shape))).item()
    return (f_plus - f_minus) / (2.0 * eps)


def finite_diff_check(f: Callable[[Tensor], Tensor], x: Tensor, eps: float = 1e-4) -> float:
    """Max over coordinates of |g_ad - g_fd| / max(1, |g_ad|, |g_fd|).

    g_fd is a single central difference with step eps.
    """
    with Tape() as tape:
        leaf = Tensor(np.array(x.data), requires_grad=True)
        out = f(leaf)
    g_ad = backward(tape, out, {"x": leaf})["x"].reshape(-1)

    base = np.array(x.data)
    worst = 0.0
    for i in range(base.size):
        g_fd = _central(f, base, i, eps)
        worst = max(worst, abs(g_ad[i] - g_fd) / max(1.0, abs(g_ad[i]), abs(g_fd)))
    return float(worst)
