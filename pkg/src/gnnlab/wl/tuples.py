"""Higher-order refinements over k-tuples: k-WL and folklore k-WL.

Tuples are indexed row-major over [n]^k. Both tests start from the
isomorphism type of each tuple and differ only in how they gather the
neighborhood of a tuple s = (i_1, ..., i_k):

  k-WL   for each position w, the multiset of colors of the n tuples obtained by
         replacing i_w with j; the k multisets are kept in position order.
  k-FWL  for each j, the ordered k-vector of colors of the tuples obtained by
         substituting j into position 1, ..., k; one multiset over j.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from gnnlab.errors import InputError
from gnnlab.graph.tensor import GraphTensor
from gnnlab.wl.base import RefinementTest
from gnnlab.wl.coloring import Coloring, digest, multiset_digest, value_bytes


@dataclass(frozen=True)
class TypeId:
    token: bytes


def iso_type(G: GraphTensor, tup: tuple[int, ...] | list[int], k: int | None = None) -> TypeId:
    """Equality pattern of the indices plus the induced k x k sub-tensor."""
    tup = tuple(int(i) for i in tup)
    if k is not None and len(tup) != k:
        raise InputError(f"expected a {k}-tuple, got {len(tup)} indices")
    if any(not 0 <= i < G.n for i in tup):
        raise InputError(f"tuple {tup} has an index outside 0..{G.n - 1}")
    first = {}
    pattern = bytes(first.setdefault(i, len(first)) for i in tup)
    sub = G.data[np.ix_(tup, tup)]
    return TypeId(digest(b"iso", pattern, value_bytes(sub)))


def neighbor_table(n: int, k: int) -> list[list[list[int]]]:
    """table[w][s][j] = index of s with position w replaced by j."""
    idx = np.arange(n**k)
    table = []
    for w in range(k):
        stride = n ** (k - 1 - w)
        digit = (idx // stride) % n
        base = idx - digit * stride
        table.append((base[:, None] + np.arange(n)[None, :] * stride).tolist())
    return table


class _TupleTest(RefinementTest):
    def __init__(self, k: int, max_entries: int | None = None):
        if k < 2:
            raise InputError(f"tuple order must be at least 2, got {k}")
        super().__init__(max_entries)
        self.k = k
        self._tables: dict[int, list[list[list[int]]]] = {}

    def _table(self, n: int) -> list[list[list[int]]]:
        if n not in self._tables:
            self._tables[n] = neighbor_table(n, self.k)
        return self._tables[n]

    def initial_tokens(self, G: GraphTensor) -> list[bytes]:
        return [iso_type(G, tup).token for tup in product(range(G.n), repeat=self.k)]


class KWL(_TupleTest):
    @property
    def name(self) -> str:  # type: ignore[override]
        return f"wl{self.k}"

    def step(self, G: GraphTensor, tokens: list[bytes]) -> list[bytes]:
        table = self._table(G.n)
        out = []
        for s in range(len(tokens)):
            parts = [multiset_digest(tokens[x] for x in table[w][s]) for w in range(self.k)]
            out.append(digest(tokens[s], *parts))
        return out


class KFWL(_TupleTest):
    @property
    def name(self) -> str:  # type: ignore[override]
        return f"fwl{self.k}"

    def step(self, G: GraphTensor, tokens: list[bytes]) -> list[bytes]:
        table = self._table(G.n)
        out = []
        for s in range(len(tokens)):
            rows = [table[w][s] for w in range(self.k)]
            vectors = (b"".join(tokens[row[j]] for row in rows) for j in range(G.n))
            out.append(digest(tokens[s], multiset_digest(vectors)))
        return out


def k_wl(G: GraphTensor, k: int, max_rounds: int | None = None, **kwargs) -> Coloring:
    return KWL(k, **kwargs).run(G, max_rounds)


def k_fwl(G: GraphTensor, k: int, max_rounds: int | None = None, **kwargs) -> Coloring:
    return KFWL(k, **kwargs).run(G, max_rounds)
