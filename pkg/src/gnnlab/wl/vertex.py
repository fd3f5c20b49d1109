"""Vertex color refinement (classical 1-dimensional Weisfeiler-Lehman)."""

from __future__ import annotations

from gnnlab.graph.tensor import GraphTensor
from gnnlab.wl.base import RefinementTest
from gnnlab.wl.coloring import Coloring, digest, multiset_digest, value_bytes


class VertexWL(RefinementTest):
    """c_{t+1}(v) = (c_t(v), {{c_t(u) : u ~ v}}), starting from the node feature vector."""

    name = "vertex"
    k = 1

    def initial_tokens(self, G: GraphTensor) -> list[bytes]:
        features = G.features
        return [digest(b"vertex", value_bytes(features[i])) for i in range(G.n)]

    def step(self, G: GraphTensor, tokens: list[bytes]) -> list[bytes]:
        neighbors = [G.neighbors(i).tolist() for i in range(G.n)]
        return [
            digest(tokens[i], multiset_digest(tokens[j] for j in neighbors[i]))
            for i in range(G.n)
        ]


def vertex_wl(G: GraphTensor, max_rounds: int | None = None) -> Coloring:
    return VertexWL().run(G, max_rounds)
