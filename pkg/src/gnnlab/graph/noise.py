"""Correlated-noise model for graph alignment pairs.

G2 = G1 * (1 - Q) + (1 - G1) * Q', with Q ~ ER(p1) removing edges and
Q' ~ ER(p2) adding edges, p2 = p1 * pe / (1 - pe) so that G2 keeps the
expected degree of G1.
"""

from __future__ import annotations

import numpy as np

from gnnlab.errors import InputError
from gnnlab.graph.generators import Seed, make_rng, sample_upper_triangle
from gnnlab.graph.tensor import GraphTensor


def noise_p2(p1: float, pe: float) -> float:
    if p1 < 0:
        raise InputError(f"noise level must be non-negative, got {p1}")
    if not 0.0 <= pe < 1.0:
        raise InputError(f"edge density must lie in [0, 1), got {pe}")
    p2 = p1 * pe / (1.0 - pe)
    if p2 > 1.0 or p1 > 1.0:
        raise InputError(f"noise level {p1} at density {pe} gives p2={p2} outside [0, 1]")
    return p2


def apply_noise(G1: GraphTensor, p1: float, pe: float, seed: Seed) -> GraphTensor:
    p2 = noise_p2(p1, pe)
    rng = make_rng(seed)
    # Q and Q' are sampled on the upper triangle and mirrored
    q_remove = sample_upper_triangle(G1.n, p1, rng)
    q_add = sample_upper_triangle(G1.n, p2, rng)
    a = G1.adjacency
    noisy = a * (1.0 - q_remove) + (1.0 - a) * q_add
    np.fill_diagonal(noisy, 0.0)

    data = np.array(G1.data)
    data[:, :, G1.e] = noisy
    return GraphTensor(n=G1.n, e=G1.e, data=data)
