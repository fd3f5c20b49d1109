"""Catalog of hand-built graph pairs that the weaker tests cannot tell apart.

Each entry has the two graphs as explicit edge lists, a description, and
the verdicts the refinement tests are known to reach on it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from gnnlab.errors import InputError
from gnnlab.graph.tensor import GraphTensor, encode_dense


@dataclass
class HardPair:
    name: str
    n: int
    edges_a: list[tuple[int, int]]
    edges_b: list[tuple[int, int]]
    description: str
    expected: dict[str, bool] = field(default_factory=dict)

    def graphs(self) -> tuple[GraphTensor, GraphTensor]:
        return encode_dense(self.n, self.edges_a), encode_dense(self.n, self.edges_b)


# 6-cycle 0-1-2-3-4-5-0
C6_EDGES = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)]

# two disjoint triangles {0,1,2} and {3,4,5}
TWO_C3_EDGES = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]

# 4x4 rook's graph: node 4r + c, adjacent iff same row or same column.
# srg(16, 6, 2, 2). Listing generated with awk over all u < v.
ROOK_4X4_EDGES = [
    (0, 1), (0, 2), (0, 3), (0, 4), (0, 8), (0, 12), (1, 2), (1, 3), (1, 5), (1, 9),
    (1, 13), (2, 3), (2, 6), (2, 10), (2, 14), (3, 7), (3, 11), (3, 15), (4, 5), (4, 6),
    (4, 7), (4, 8), (4, 12), (5, 6), (5, 7), (5, 9), (5, 13), (6, 7), (6, 10), (6, 14),
    (7, 11), (7, 15), (8, 9), (8, 10), (8, 11), (8, 12), (9, 10), (9, 11), (9, 13), (10, 11),
    (10, 14), (11, 15), (12, 13), (12, 14), (12, 15), (13, 14), (13, 15), (14, 15),
]  # fmt: skip

# Shrikhande graph: Cayley graph of Z4 x Z4 with connection set
# {+-(1,0), +-(0,1), +-(1,1)}, node (a, b) -> 4a + b. Also srg(16, 6, 2, 2).
SHRIKHANDE_EDGES = [
    (0, 1), (0, 3), (0, 4), (0, 5), (0, 12), (0, 15), (1, 2), (1, 5), (1, 6), (1, 12),
    (1, 13), (2, 3), (2, 6), (2, 7), (2, 13), (2, 14), (3, 4), (3, 7), (3, 14), (3, 15),
    (4, 5), (4, 7), (4, 8), (4, 9), (5, 6), (5, 9), (5, 10), (6, 7), (6, 10), (6, 11),
    (7, 8), (7, 11), (8, 9), (8, 11), (8, 12), (8, 13), (9, 10), (9, 13), (9, 14), (10, 11),
    (10, 14), (10, 15), (11, 12), (11, 15), (12, 13), (12, 15), (13, 14), (14, 15),
]  # fmt: skip


HARD_PAIRS: dict[str, HardPair] = {
    pair.name: pair
    for pair in [
        HardPair(
            name="c6_vs_2c3",
            n=6,
            edges_a=C6_EDGES,
            edges_b=TWO_C3_EDGES,
            description="2-regular on 6 nodes; differ only in triangle content",
            expected={"vertex": False, "wl2": False, "wl3": True, "fwl2": True, "fwl3": True},
        ),
        HardPair(
            name="rook_vs_shrikhande",
            n=16,
            edges_a=ROOK_4X4_EDGES,
            edges_b=SHRIKHANDE_EDGES,
            description="non-isomorphic strongly regular graphs with equal parameters",
            expected={"vertex": False, "wl2": False, "wl3": False, "fwl2": False},
        ),
    ]
}


def get_hard_pair(name: str) -> HardPair:
    try:
        return HARD_PAIRS[name]
    except KeyError:
        raise InputError(f"unknown hard pair {name!r}; known: {sorted(HARD_PAIRS)}") from None
