"""Graph layers: initialization, message passing, linear equivariant, folklore, reductions.

Every layer takes batched tensors with a leading batch axis (node tensors
b x n x d, pair tensors b x n x n x c) together with an optional node mask
(b x n). Unbatched inputs (n x d, n x n x c) are accepted and returned
unbatched. With a mask, padded rows and columns stay exactly zero on output
and padded positions never feed a sum.
"""

from __future__ import annotations

from collections.abc import Mapping

import numpy as np

from gnnlab.autodiff import ops
from gnnlab.autodiff.tensor import Tensor
from gnnlab.errors import InputError
from gnnlab.gnn.basis import NUM_BASIS, basis_stack, basis_stack_adjoint
from gnnlab.gnn.mlp import mlp_forward
from gnnlab.graph.tensor import GraphTensor
from gnnlab.models import MLPSpec

Params = Mapping[str, Tensor]


def pair_mask_of(mask: np.ndarray) -> np.ndarray:
    return mask[:, :, None] & mask[:, None, :]


def _lift(x: Tensor, rank: int) -> tuple[Tensor, bool]:
    """Add a batch axis to an unbatched tensor of the given batched rank."""
    if x.ndim == rank:
        return x, False
    if x.ndim == rank - 1:
        return ops.reshape(x, (1,) + x.shape), True
    raise InputError(f"expected a tensor of rank {rank - 1} or {rank}, got shape {x.shape}")


def _drop(x: Tensor, squeeze: bool) -> Tensor:
    return ops.reshape(x, x.shape[1:]) if squeeze else x


def mask_nodes(x: Tensor, mask: np.ndarray | None) -> Tensor:
    return x if mask is None else ops.apply_mask(x, mask)


def mask_pairs(x: Tensor, mask: np.ndarray | None) -> Tensor:
    return x if mask is None else ops.apply_mask(x, pair_mask_of(mask))


# --- initialization ------------------------------------------------------------


def delta_channel(b: int, n: int, mask: np.ndarray | None = None) -> np.ndarray:
    """b x n x n x 1 Kronecker delta, zero on padded nodes."""
    delta = np.zeros((b, n, n, 1))
    idx = np.arange(n)
    delta[:, idx, idx, 0] = 1.0 if mask is None else mask
    return delta


def i2_init(G: GraphTensor | np.ndarray, mask: np.ndarray | None = None) -> np.ndarray:
    """Append the delta channel: out[..., i, j, :] = (G[..., i, j, :], delta_ij)."""
    data = G.data if isinstance(G, GraphTensor) else np.asarray(G, dtype=np.float64)
    if data.ndim == 3:
        return np.concatenate([data, delta_channel(1, data.shape[0])[0]], axis=-1)
    return np.concatenate([data, delta_channel(data.shape[0], data.shape[1], mask)], axis=-1)


def node_inputs(data: np.ndarray, mask: np.ndarray | None = None) -> np.ndarray:
    """Initial node features for message passing: diagonal features plus a constant 1."""
    b, n = data.shape[0], data.shape[1]
    idx = np.arange(n)
    feats = data[:, idx, idx, :-1]
    ones = np.ones((b, n, 1)) if mask is None else mask[:, :, None].astype(np.float64)
    return np.concatenate([feats * ones, ones], axis=-1)


# --- message passing -----------------------------------------------------------


def mgnn_layer(
    adjacency: np.ndarray,
    h: Tensor,
    f0: MLPSpec,
    f1: MLPSpec,
    params: Params,
    prefix: str,
    mask: np.ndarray | None = None,
) -> Tensor:
    """h_i <- f0(h_i, sum_{j ~ i} f1(h_i, h_j))."""
    h, squeeze = _lift(h, 3)
    adjacency = np.asarray(adjacency)
    if adjacency.ndim == 2:
        adjacency = adjacency[None]
    b, n, d = h.shape
    if adjacency.shape != (b, n, n):
        raise InputError(f"adjacency {adjacency.shape} does not match features {h.shape}")
    if f1.fan_in != 2 * d or f0.fan_in != d + f1.fan_out:
        raise InputError(f"{prefix}: MLP widths do not chain with feature width {d}")

    h_i = ops.expand(h, axis=2, size=n)
    h_j = ops.expand(h, axis=1, size=n)
    messages = mlp_forward(ops.concat([h_i, h_j]), f1, params, f"{prefix}.f1")
    messages = ops.apply_mask(messages, adjacency != 0)
    aggregated = ops.reduce_sum(messages, axes=2)
    out = mlp_forward(ops.concat([h, aggregated]), f0, params, f"{prefix}.f0")
    return _drop(mask_nodes(out, mask), squeeze)


# --- linear equivariant --------------------------------------------------------


def eq_basis2(H: Tensor) -> Tensor:
    """Differentiable basis expansion: (b, n, n, c) -> (b, n, n, c, 15)."""
    return ops.linear_map(H, basis_stack, basis_stack_adjoint)


def lgnn2_shapes(c_in: int, c_out: int, prefix: str) -> dict[str, tuple[int, ...]]:
    # W rows are indexed by c_in * 15 + basis index
    return {
        f"{prefix}.L.W": (c_in * NUM_BASIS, c_out),
        f"{prefix}.L.b": (c_out,),
        f"{prefix}.L.diag": (1, c_out),
    }


def lgnn2_layer(
    H: Tensor,
    f: MLPSpec,
    params: Params,
    prefix: str,
    mask: np.ndarray | None = None,
) -> Tensor:
    """f(L[H]) with L a learned combination of the 15 basis maps plus two equivariant biases."""
    H, squeeze = _lift(H, 4)
    b, n, _, c = H.shape
    W = params[f"{prefix}.L.W"]
    if W.shape[0] != c * NUM_BASIS:
        raise InputError(f"{prefix}: weight {W.shape} does not fit {c} input channels")

    expanded = ops.reshape(eq_basis2(H), (b, n, n, c * NUM_BASIS))
    linear = ops.affine(expanded, W, params[f"{prefix}.L.b"])
    diag_bias = ops.affine(Tensor(delta_channel(b, n, mask)), params[f"{prefix}.L.diag"])
    linear = mask_pairs(ops.add(linear, diag_bias), mask)
    out = mlp_forward(linear, f, params, f"{prefix}.f")
    return _drop(mask_pairs(out, mask), squeeze)


# --- folklore ------------------------------------------------------------------


def fgl2_layer(
    H: Tensor,
    f0: MLPSpec,
    f1: MLPSpec,
    f2: MLPSpec,
    params: Params,
    prefix: str,
    mask: np.ndarray | None = None,
) -> Tensor:
    """F(H)_{i1,i2} = f0(H_{i1,i2}, sum_j f1(H_{j,i2}) * f2(H_{i1,j}))."""
    H, squeeze = _lift(H, 4)
    c = H.shape[-1]
    if f1.fan_out != f2.fan_out or f0.fan_in != c + f1.fan_out:
        raise InputError(f"{prefix}: MLP widths do not chain with {c} channels")

    right = mask_pairs(mlp_forward(H, f1, params, f"{prefix}.f1"), mask)
    left = mask_pairs(mlp_forward(H, f2, params, f"{prefix}.f2"), mask)
    # per-channel matrix product: (b, m, n, n) @ (b, m, n, n)
    channels_first = (0, 3, 1, 2)
    product = ops.matmul(
        ops.permute_axes(left, channels_first), ops.permute_axes(right, channels_first)
    )
    product = ops.permute_axes(product, (0, 2, 3, 1))
    out = mlp_forward(ops.concat([H, product]), f0, params, f"{prefix}.f0")
    return _drop(mask_pairs(out, mask), squeeze)


# --- reductions ----------------------------------------------------------------


def s2_sum(H: Tensor, mask: np.ndarray | None = None) -> Tensor:
    """Invariant summation over all n^2 positions."""
    H, squeeze = _lift(H, 4)
    out = ops.reduce_sum(H, axes=(1, 2), mask=None if mask is None else pair_mask_of(mask))
    return _drop(out, squeeze)


def s2_1_reduce(H: Tensor, mask: np.ndarray | None = None) -> Tensor:
    """Equivariant reduction: out_i = sum_j H_ij."""
    H, squeeze = _lift(H, 4)
    out = ops.reduce_sum(H, axes=2, mask=None if mask is None else pair_mask_of(mask))
    return _drop(mask_nodes(out, mask), squeeze)


def s1_sum(h: Tensor, mask: np.ndarray | None = None) -> Tensor:
    h, squeeze = _lift(h, 3)
    return _drop(ops.reduce_sum(h, axes=1, mask=mask), squeeze)


def id_plus_lambda_s1(
    h: Tensor,
    lam: Tensor | float,
    mask: np.ndarray | None = None,
    convex: bool = False,
) -> Tensor:
    """out_i = h_i + lam * sum_j h_j, or (1 - lam) h_i + lam * sum_j h_j when convex."""
    h, squeeze = _lift(h, 3)
    lam = lam if isinstance(lam, Tensor) else Tensor(lam)
    if lam.shape != ():
        raise InputError(f"lambda must be a scalar, got shape {lam.shape}")
    total = ops.expand(ops.reduce_sum(h, axes=1, mask=mask), axis=1, size=h.shape[1])
    keep = ops.sub(Tensor(1.0), lam) if convex else Tensor(1.0)
    out = ops.add(ops.mul(keep, h), ops.mul(lam, total))
    return _drop(mask_nodes(out, mask), squeeze)
