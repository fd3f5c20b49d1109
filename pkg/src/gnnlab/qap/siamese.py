"""Siamese embedding, similarity scores and the per-row matching loss."""

from __future__ import annotations

from collections.abc import Mapping, Sequence

import numpy as np

from gnnlab.autodiff import ops
from gnnlab.autodiff.tensor import Tensor
from gnnlab.errors import InputError
from gnnlab.gnn.model import model_forward
from gnnlab.graph.batching import make_masked_batch
from gnnlab.graph.tensor import Permutation
from gnnlab.models import ModelSpec, Variant
from gnnlab.qap.dataset import MatchInstance


def _require_equivariant(spec: ModelSpec) -> None:
    if spec.variant != Variant.EQUIVARIANT:
        raise InputError("graph matching needs node embeddings; use an equivariant model")


def similarity(E1: Tensor, E2: Tensor) -> Tensor:
    """S = E1 E2^T, batched over a leading axis when present."""
    if E1.ndim == 2:
        return ops.matmul(E1, ops.transpose(E2))
    return ops.matmul(E1, ops.permute_axes(E2, (0, 2, 1)))


def siamese_forward(spec: ModelSpec, params: Mapping[str, Tensor], inst: MatchInstance) -> Tensor:
    """n x n scores S[i, j] between node i of g1 and node j of g2, shared parameters."""
    _require_equivariant(spec)
    return similarity(model_forward(spec, inst.g1, params), model_forward(spec, inst.g2, params))


def siamese_batch(
    spec: ModelSpec,
    params: Mapping[str, Tensor],
    instances: Sequence[MatchInstance],
) -> tuple[Tensor, np.ndarray]:
    """b x n_max x n_max scores plus the b x n_max node mask."""
    _require_equivariant(spec)
    batch1 = make_masked_batch([inst.g1 for inst in instances])
    batch2 = make_masked_batch([inst.g2 for inst in instances])
    S = similarity(model_forward(spec, batch1, params), model_forward(spec, batch2, params))
    return S, batch1.mask


def _targets(truths: Sequence[Permutation], n: int) -> np.ndarray:
    onehot = np.zeros((len(truths), n, n))
    for b, truth in enumerate(truths):
        onehot[b, np.arange(len(truth)), truth.map] = 1.0
    return onehot


def matching_loss(
    S: Tensor,
    truth: Permutation | Sequence[Permutation],
    mask: np.ndarray | None = None,
) -> Tensor:
    """Mean over unmasked rows i of -log softmax(S_i)[truth(i)].

    Rows are softmaxed over unmasked columns only. In a batch every real row
    counts once, so instances of different sizes are weighted by their size.
    """
    single = S.ndim == 2
    truths = [truth] if single else list(truth)
    if single:
        S = ops.reshape(S, (1,) + S.shape)
    b, n = S.shape[0], S.shape[1]
    if S.shape != (b, n, n) or len(truths) != b:
        raise InputError(f"scores of shape {S.shape} do not match {len(truths)} truths")
    if mask is None:
        mask = np.ones((b, n), dtype=bool)
    mask = np.asarray(mask, dtype=bool).reshape(b, n)
    if not mask.any(axis=1).all():
        raise InputError("an instance has no unmasked nodes")
    for t, m in zip(truths, mask):
        if len(t) != int(m.sum()):
            raise InputError(f"truth of length {len(t)} for an instance with {int(m.sum())} nodes")

    columns = np.broadcast_to(mask[:, None, :], (b, n, n))
    log_p = ops.row_log_softmax(S, columns)
    picked = ops.reduce_sum(ops.mul(Tensor(_targets(truths, n)), log_p))
    return ops.scale(picked, -1.0 / float(mask.sum()))
