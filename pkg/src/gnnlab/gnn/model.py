"""Assembled models: MGNN, LGNN2 and FGNN2, each invariant or equivariant.

    MGNN_I  = m_I . S1 . F_T ... F_1
    MGNN_E  = m_E . (Id + lam S1) . F_T ... F_1
    LGNN2_I = m_I . S2 . L_T ... L_1 . I2         (FGNN2 likewise with folklore layers)
    LGNN2_E = m_E . S2_1 . L_T ... L_1 . I2
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence

import numpy as np

from gnnlab.autodiff import ops
from gnnlab.autodiff.init import glorot_uniform, zeros
from gnnlab.autodiff.tensor import Tensor, parameter
from gnnlab.errors import InputError
from gnnlab.gnn import layers
from gnnlab.gnn.mlp import init_mlp, mlp_forward, mlp_shapes
from gnnlab.graph.batching import MaskedBatch, make_masked_batch
from gnnlab.graph.tensor import GraphTensor
from gnnlab.models import ModelFamily, ModelSpec, Variant

LAMBDA = "lambda"

ModelInput = GraphTensor | MaskedBatch | Sequence[GraphTensor]


def _has_lambda(spec: ModelSpec) -> bool:
    return spec.family == ModelFamily.MGNN and spec.variant == Variant.EQUIVARIANT


def param_shapes(spec: ModelSpec) -> dict[str, tuple[int, ...]]:
    """Name -> shape for every learnable parameter of the model."""
    shapes: dict[str, tuple[int, ...]] = {}
    if spec.family == ModelFamily.LGNN2:
        chain = spec.widths_chain()
        for t, (c_in, c_out) in enumerate(zip(chain[:-1], chain[1:])):
            shapes.update(layers.lgnn2_shapes(c_in, c_out, f"layer{t}"))
    for prefix, mlp in spec.mlp_specs().items():
        shapes.update(mlp_shapes(mlp, prefix))
    if _has_lambda(spec):
        shapes[LAMBDA] = ()
    return shapes


def init_params(spec: ModelSpec, seed: int = 0) -> dict[str, Tensor]:
    """Glorot weights and zero biases; lambda starts at 0."""
    params: dict[str, Tensor] = {}
    if spec.family == ModelFamily.LGNN2:
        chain = spec.widths_chain()
        for t, (c_in, c_out) in enumerate(zip(chain[:-1], chain[1:])):
            for name, shape in layers.lgnn2_shapes(c_in, c_out, f"layer{t}").items():
                if name.endswith(".W"):
                    params[name] = glorot_uniform(shape[0], shape[1], seed, name)
                else:
                    params[name] = zeros(shape, name)
    for prefix, mlp in spec.mlp_specs().items():
        params.update(init_mlp(mlp, prefix, seed))
    if _has_lambda(spec):
        params[LAMBDA] = parameter(np.zeros(()), name=LAMBDA)
    return params


def check_params(spec: ModelSpec, params: Mapping[str, Tensor]) -> None:
    expected = param_shapes(spec)
    missing = sorted(set(expected) - set(params))
    if missing:
        raise InputError(f"missing parameters: {missing[:5]}")
    extra = sorted(set(params) - set(expected))
    if extra:
        raise InputError(f"unexpected parameters: {extra[:5]}")
    for name, shape in expected.items():
        if params[name].shape != shape:
            raise InputError(f"parameter {name} has shape {params[name].shape}, expected {shape}")


def _as_batch(x: ModelInput) -> tuple[MaskedBatch, bool]:
    if isinstance(x, MaskedBatch):
        return x, False
    if isinstance(x, GraphTensor):
        return make_masked_batch([x]), True
    return make_masked_batch(list(x)), False


def model_forward(spec: ModelSpec, x: ModelInput, params: Mapping[str, Tensor]) -> Tensor:
    """Run the model.

    A single GraphTensor gives an out_width vector (invariant) or an
    n x out_width matrix (equivariant). A batch gives a leading batch axis;
    padded rows of equivariant outputs are zero.
    """
    check_params(spec, params)
    batch, single = _as_batch(x)
    if batch.channels != spec.in_channels:
        raise InputError(
            f"graphs have {batch.channels} channels but the model expects {spec.in_channels}"
        )
    mask = batch.mask
    mlps = spec.mlp_specs()

    if spec.family == ModelFamily.MGNN:
        adjacency = batch.data[..., -1]
        h = Tensor(layers.node_inputs(batch.data, mask))
        for t in range(spec.num_layers):
            h = layers.mgnn_layer(
                adjacency, h, mlps[f"layer{t}.f0"], mlps[f"layer{t}.f1"], params, f"layer{t}", mask
            )
        if spec.variant == Variant.INVARIANT:
            out = mlp_forward(layers.s1_sum(h, mask), mlps["m_I"], params, "m_I")
        else:
            h = layers.id_plus_lambda_s1(h, params[LAMBDA], mask, convex=spec.head == "convex")
            out = layers.mask_nodes(mlp_forward(h, mlps["m_E"], params, "m_E"), mask)
    else:
        H = Tensor(layers.i2_init(batch.data, mask))
        for t in range(spec.num_layers):
            prefix = f"layer{t}"
            if spec.family == ModelFamily.LGNN2:
                H = layers.lgnn2_layer(H, mlps[f"{prefix}.f"], params, prefix, mask)
            else:
                H = layers.fgl2_layer(
                    H,
                    mlps[f"{prefix}.f0"],
                    mlps[f"{prefix}.f1"],
                    mlps[f"{prefix}.f2"],
                    params,
                    prefix,
                    mask,
                )
        if spec.variant == Variant.INVARIANT:
            out = mlp_forward(layers.s2_sum(H, mask), mlps["m_I"], params, "m_I")
        else:
            h = layers.s2_1_reduce(H, mask)
            out = layers.mask_nodes(mlp_forward(h, mlps["m_E"], params, "m_E"), mask)

    if single:
        out = ops.reshape(out, out.shape[1:])
    return out


def forward_numpy(spec: ModelSpec, x: ModelInput, params: Mapping[str, Tensor]) -> np.ndarray:
    """Inference helper returning a plain array."""
    return model_forward(spec, x, params).numpy()
