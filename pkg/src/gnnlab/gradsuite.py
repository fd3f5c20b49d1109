"""Finite-difference gradient suite over primitives, layers, models and the matching loss."""

from __future__ import annotations

from collections.abc import Callable

import numpy as np

from gnnlab.autodiff import ops
from gnnlab.autodiff.gradcheck import finite_diff_check
from gnnlab.autodiff.tensor import Tensor
from gnnlab.errors import GenerationError
from gnnlab.gnn import layers
from gnnlab.gnn.mlp import init_mlp
from gnnlab.gnn.model import init_params, model_forward
from gnnlab.graph.generators import gen_erdos_renyi, make_rng
from gnnlab.graph.tensor import Permutation, permute
from gnnlab.models import MLPSpec, ModelFamily, ModelSpec, Variant
from gnnlab.qap.dataset import MatchInstance
from gnnlab.qap.siamese import matching_loss, siamese_batch

GRAD_TOL = 1e-4
MAX_DRAWS = 25

Check = tuple[Callable[[Tensor], Tensor], Tensor]
Builder = Callable[[np.random.Generator], Check]

_N = 4


def _readout(op: Callable[[Tensor], Tensor], x: np.ndarray, rng: np.random.Generator) -> Check:
    """Scalar function: a fixed random linear functional of op(x)."""
    weights = Tensor(rng.normal(size=op(Tensor(x)).shape))

    def f(t: Tensor) -> Tensor:
        return ops.reduce_sum(ops.mul(op(t), weights))

    return f, Tensor(x)


def _jitter(params: dict[str, Tensor], rng: np.random.Generator) -> dict[str, Tensor]:
    # non-zero biases so the relu pattern is generic
    return {k: Tensor(v.data + 0.1 * rng.normal(size=v.shape)) for k, v in params.items()}


def _mlp_params(prefix: str, spec: MLPSpec, rng: np.random.Generator) -> dict[str, Tensor]:
    return _jitter(init_mlp(spec, prefix, int(rng.integers(2**31))), rng)


PRIMITIVE_MASK = np.array([[True, True, False], [True, False, True]])
_ONES = Tensor(np.ones((2, 3)))
_BIAS = Tensor(np.ones(2))

# name -> (op, input shape)
PRIMITIVES: dict[str, tuple[Callable[[Tensor], Tensor], tuple[int, ...]]] = {
    "add": (lambda t: ops.add(t, _ONES), (2, 3)),
    "sub": (lambda t: ops.sub(_ONES, t), (2, 3)),
    "mul": (lambda t: ops.mul(t, t), (2, 3)),
    "scale": (lambda t: ops.scale(t, -2.5), (2, 3)),
    "matmul": (lambda t: ops.matmul(t, ops.permute_axes(t, (0, 2, 1))), (2, 3, 3)),
    "affine": (lambda t: ops.affine(Tensor(np.arange(6.0).reshape(2, 3)), t, _BIAS), (3, 2)),
    "relu": (ops.relu, (3, 3)),
    "log": (lambda t: ops.log(ops.add(ops.mul(t, t), Tensor(0.5))), (3, 3)),
    "row_softmax": (lambda t: ops.row_softmax(t, PRIMITIVE_MASK), (2, 3)),
    "row_log_softmax": (lambda t: ops.row_log_softmax(t, PRIMITIVE_MASK), (2, 3)),
    "reduce_sum": (lambda t: ops.reduce_sum(t, axes=1, mask=PRIMITIVE_MASK), (2, 3, 2)),
    "concat": (lambda t: ops.concat([t, ops.scale(t, 3.0)]), (2, 2)),
    "transpose": (ops.transpose, (2, 3)),
    "reshape": (lambda t: ops.reshape(t, (3, 2)), (2, 3)),
    "expand": (lambda t: ops.expand(t, 1, 4), (2, 3)),
    "apply_mask": (lambda t: ops.apply_mask(t, PRIMITIVE_MASK), (2, 3)),
    "eq_basis2": (layers.eq_basis2, (1, _N, _N, 2)),
}


def _primitive_builder(op: Callable[[Tensor], Tensor], shape: tuple[int, ...]) -> Builder:
    return lambda r: _readout(op, r.normal(size=shape), r)


LAYER_MASK = np.array([[True, True, True, False], [True, True, False, False]])

REDUCTIONS: dict[str, tuple[Callable[[Tensor], Tensor], tuple[int, ...]]] = {
    "s2_sum": (lambda t: layers.s2_sum(t, LAYER_MASK), (2, 4, 4, 2)),
    "s2_1_reduce": (lambda t: layers.s2_1_reduce(t, LAYER_MASK), (2, 4, 4, 2)),
    "id_plus_lambda_s1": (lambda t: layers.id_plus_lambda_s1(t, 0.7, LAYER_MASK), (2, 4, 3)),
}


def _layer_builders() -> dict[str, Builder]:
    def mgnn(r):
        d, m = 2, 3
        f1, f0 = MLPSpec.build(2 * d, 4, m, 2), MLPSpec.build(d + m, 4, 3, 2)
        params = {**_mlp_params("l.f1", f1, r), **_mlp_params("l.f0", f0, r)}
        adjacency = gen_erdos_renyi(_N, 0.5, int(r.integers(2**31))).adjacency

        def op(t):
            return layers.mgnn_layer(adjacency, t, f0, f1, params, "l")

        return _readout(op, r.normal(size=(_N, d)), r)

    def lgnn2(r):
        c, c_out = 2, 3
        f = MLPSpec.build(c_out, 4, c_out, 2)
        params = _mlp_params("l.f", f, r)
        params["l.L.W"] = Tensor(r.normal(size=(c * 15, c_out)) * 0.3)
        params["l.L.b"] = Tensor(r.normal(size=(c_out,)))
        params["l.L.diag"] = Tensor(r.normal(size=(1, c_out)))

        def op(t):
            return layers.lgnn2_layer(t, f, params, "l")

        return _readout(op, r.normal(size=(_N, _N, c)), r)

    def fgl2(r):
        c, m = 2, 3
        f1, f2 = MLPSpec.build(c, 4, m, 2), MLPSpec.build(c, 4, m, 2)
        f0 = MLPSpec.build(c + m, 4, 3, 2)
        params = {
            **_mlp_params("l.f0", f0, r),
            **_mlp_params("l.f1", f1, r),
            **_mlp_params("l.f2", f2, r),
        }

        def op(t):
            return layers.fgl2_layer(t, f0, f1, f2, params, "l")

        return _readout(op, r.normal(size=(_N, _N, c)), r)

    reductions = {name: _primitive_builder(op, shape) for name, (op, shape) in REDUCTIONS.items()}
    return {"mgnn_layer": mgnn, "lgnn2_layer": lgnn2, "fgl2_layer": fgl2, **reductions}


_TINY = dict(layer_widths=[3, 3], mlp_hidden=4, mlp_depth=2, out_width=3)


def _model_builder(family: ModelFamily, variant: Variant) -> Builder:
    """Gradient with respect to the first weight matrix of the first layer."""

    def build(r):
        spec = ModelSpec(family=family, variant=variant, **_TINY)
        params = _jitter(init_params(spec, int(r.integers(2**31))), r)
        graphs = [gen_erdos_renyi(n, 0.5, int(r.integers(2**31))) for n in (_N, _N - 1)]
        name = sorted(k for k in params if k.startswith("layer0") and k.endswith("W0"))[0]

        def op(t: Tensor) -> Tensor:
            return model_forward(spec, graphs, {**params, name: t})

        return _readout(op, params[name].data, r)

    return build


def _loss_builder(r: np.random.Generator) -> Check:
    n = 5
    truth = Permutation.random(n, r)
    return (lambda t: matching_loss(t, truth)), Tensor(r.normal(size=(n, n)))


def _siamese_builder(r: np.random.Generator) -> Check:
    spec = ModelSpec(family=ModelFamily.FGNN2, variant=Variant.EQUIVARIANT, **_TINY)
    params = _jitter(init_params(spec, int(r.integers(2**31))), r)
    instances = []
    for n in (_N, _N - 1):
        g = gen_erdos_renyi(n, 0.5, int(r.integers(2**31)))
        sigma = Permutation.random(n, r)
        instances.append(MatchInstance(g1=g, g2=permute(g, sigma), truth=sigma))
    name = "m_E.W0"

    def f(t: Tensor) -> Tensor:
        S, mask = siamese_batch(spec, {**params, name: t}, instances)
        return matching_loss(S, [inst.truth for inst in instances], mask)

    return f, Tensor(params[name].data)


def builders() -> dict[str, Builder]:
    table: dict[str, Builder] = {}
    table.update({f"op.{k}": _primitive_builder(*v) for k, v in PRIMITIVES.items()})
    table.update({f"layer.{k}": v for k, v in _layer_builders().items()})
    for family in ModelFamily:
        for variant in Variant:
            table[f"model.{family.value}_{variant.value}"] = _model_builder(family, variant)
    table["loss.matching"] = _loss_builder
    table["loss.siamese"] = _siamese_builder
    return table


def activation_pattern(f: Callable[[Tensor], Tensor], x: Tensor) -> list[np.ndarray]:
    with ops.recording_relu_patterns() as patterns:
        f(x)
    return patterns


def kink_free(f: Callable[[Tensor], Tensor], x: Tensor, eps: float) -> bool:
    """True when no relu changes sign on the +-eps stencil of any coordinate of x."""
    reference = activation_pattern(f, x)
    flat = x.data.reshape(-1)
    for i in range(flat.size):
        for step in (eps, -eps):
            moved = flat.copy()
            moved[i] += step
            pattern = activation_pattern(f, Tensor(moved.reshape(x.shape)))
            if len(pattern) != len(reference):
                return False
            if not all(np.array_equal(a, b) for a, b in zip(pattern, reference)):
                return False
    return True


def _draw(name: str, build: Builder, rng: np.random.Generator, eps: float) -> Check:
    for _ in range(MAX_DRAWS):
        f, x = build(rng)
        if kink_free(f, x, eps):
            return f, x
    raise GenerationError(f"{name}: no kink-free evaluation point in {MAX_DRAWS} draws")


def grad_suite(seed: int = 0, points: int = 10, eps: float = 1e-4) -> dict[str, float]:
    """Max relative error per check over `points` random kink-free evaluation points."""
    rng = make_rng(seed)
    errors: dict[str, float] = {}
    for name, build in builders().items():
        worst = 0.0
        for _ in range(points):
            f, x = _draw(name, build, rng, eps)
            worst = max(worst, finite_diff_check(f, x, eps))
        errors[name] = worst
    return errors
