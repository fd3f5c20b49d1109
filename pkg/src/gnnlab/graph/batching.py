"""Masked batches of variable-size graphs.

A batch of b graphs with sizes n_1..n_b is one b x n_max x n_max x c array,
zero-padded, plus a b x n_max node mask.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from gnnlab.errors import InputError
from gnnlab.graph.tensor import GraphTensor


@dataclass(frozen=True, eq=False)
class MaskedBatch:
    data: np.ndarray
    mask: np.ndarray
    sizes: tuple[int, ...]
    e: int

    def __post_init__(self) -> None:
        for name in ("data", "mask"):
            getattr(self, name).setflags(write=False)

    @property
    def b(self) -> int:
        return int(self.data.shape[0])

    @property
    def n_max(self) -> int:
        return int(self.data.shape[1])

    @property
    def channels(self) -> int:
        return int(self.data.shape[3])

    @property
    def pair_mask(self) -> np.ndarray:
        """b x n_max x n_max, true where both row and column are real nodes."""
        return self.mask[:, :, None] & self.mask[:, None, :]

    def extract(self, i: int) -> GraphTensor:
        n = self.sizes[i]
        return GraphTensor(n=n, e=self.e, data=self.data[i, :n, :n].copy())

    def graphs(self) -> list[GraphTensor]:
        return [self.extract(i) for i in range(self.b)]


def make_masked_batch(graphs: list[GraphTensor]) -> MaskedBatch:
    if not graphs:
        raise InputError("cannot batch an empty list of graphs")
    channels = {g.channels for g in graphs}
    if len(channels) != 1:
        raise InputError(f"graphs disagree on channel count: {sorted(channels)}")
    c = channels.pop()
    sizes = tuple(g.n for g in graphs)
    n_max = max(sizes)

    data = np.zeros((len(graphs), n_max, n_max, c))
    mask = np.zeros((len(graphs), n_max), dtype=bool)
    for i, g in enumerate(graphs):
        data[i, : g.n, : g.n] = g.data
        mask[i, : g.n] = True
    return MaskedBatch(data=data, mask=mask, sizes=sizes, e=c - 1)
