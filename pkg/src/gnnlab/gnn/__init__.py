"""Layers and assembled graph networks."""

from gnnlab.gnn.basis import NUM_BASIS, lin_eq_basis2
from gnnlab.gnn.layers import (
    fgl2_layer,
    i2_init,
    id_plus_lambda_s1,
    lgnn2_layer,
    mgnn_layer,
    s1_sum,
    s2_1_reduce,
    s2_sum,
)
from gnnlab.gnn.mlp import init_mlp, mlp_forward
from gnnlab.gnn.model import forward_numpy, init_params, model_forward, param_shapes

__all__ = [
    "NUM_BASIS",
    "fgl2_layer",
    "forward_numpy",
    "i2_init",
    "id_plus_lambda_s1",
    "init_mlp",
    "init_params",
    "lgnn2_layer",
    "lin_eq_basis2",
    "mgnn_layer",
    "mlp_forward",
    "model_forward",
    "param_shapes",
    "s1_sum",
    "s2_1_reduce",
    "s2_sum",
]
