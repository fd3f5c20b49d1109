"""Multi-layer perceptrons applied to the last axis of a tensor."""

from __future__ import annotations

from collections.abc import Mapping

from gnnlab.autodiff import ops
from gnnlab.autodiff.init import glorot_uniform, zeros
from gnnlab.autodiff.tensor import Tensor
from gnnlab.errors import InputError
from gnnlab.models import MLPSpec


def mlp_shapes(spec: MLPSpec, prefix: str) -> dict[str, tuple[int, ...]]:
    shapes: dict[str, tuple[int, ...]] = {}
    for layer, (a, b) in enumerate(zip(spec.widths[:-1], spec.widths[1:])):
        shapes[f"{prefix}.W{layer}"] = (a, b)
        shapes[f"{prefix}.b{layer}"] = (b,)
    return shapes


def init_mlp(spec: MLPSpec, prefix: str, seed: int) -> dict[str, Tensor]:
    params: dict[str, Tensor] = {}
    for layer, (a, b) in enumerate(zip(spec.widths[:-1], spec.widths[1:])):
        params[f"{prefix}.W{layer}"] = glorot_uniform(a, b, seed, f"{prefix}.W{layer}")
        params[f"{prefix}.b{layer}"] = zeros((b,), f"{prefix}.b{layer}")
    return params


def mlp_forward(x: Tensor, spec: MLPSpec, params: Mapping[str, Tensor], prefix: str) -> Tensor:
    if x.shape[-1] != spec.fan_in:
        raise InputError(f"{prefix}: input width {x.shape[-1]} but MLP expects {spec.fan_in}")
    depth = len(spec.widths) - 1
    for layer in range(depth):
        x = ops.affine(x, params[f"{prefix}.W{layer}"], params[f"{prefix}.b{layer}"])
        if layer < depth - 1:
            x = ops.relu(x)
    return x
