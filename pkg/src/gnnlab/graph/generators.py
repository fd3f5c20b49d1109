"""Seeded random graph generators.

All randomness flows through numpy's PCG64 bit generator. A seed is either a
plain non-negative integer or a `SeedSequence`, so callers can derive
independent per-instance streams.
"""

from __future__ import annotations

from collections import defaultdict

import numpy as np

from gnnlab.config import settings
from gnnlab.errors import GenerationError, InputError
from gnnlab.graph.tensor import GraphTensor

Seed = int | np.random.SeedSequence


def seed_sequence(seed: Seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    if seed < 0 or seed >= 2**64:
        raise InputError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.SeedSequence(seed)


def make_rng(seed: Seed) -> np.random.Generator:
    if settings.rng_algorithm != "PCG64":
        raise InputError(f"unsupported RNG algorithm {settings.rng_algorithm!r}")
    return np.random.Generator(np.random.PCG64(seed_sequence(seed)))


def sample_upper_triangle(n: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """Symmetric 0/1 matrix, each unordered pair set independently with probability p."""
    rows, cols = np.triu_indices(n, k=1)
    hits = rng.random(rows.size) < p
    out = np.zeros((n, n))
    out[rows[hits], cols[hits]] = 1.0
    return out + out.T


def gen_erdos_renyi(n: int, p: float, seed: Seed) -> GraphTensor:
    if n < 1:
        raise InputError(f"node count must be positive, got {n}")
    if not 0.0 <= p <= 1.0:
        raise InputError(f"edge probability must lie in [0, 1], got {p}")
    return GraphTensor.from_adjacency(sample_upper_triangle(n, p, make_rng(seed)))


def _suitable(edges: set[tuple[int, int]], potential: dict[int, int]) -> bool:
    """Whether some pair of nodes with open stubs can still be joined."""
    if not potential:
        return True
    nodes = list(potential)
    for a in range(len(nodes)):
        for b in range(a + 1, len(nodes)):
            u, v = sorted((nodes[a], nodes[b]))
            if (u, v) not in edges:
                return True
    return False


def _try_pairing(n: int, d: int, rng: np.random.Generator) -> set[tuple[int, int]] | None:
    # Pairing model: shuffle stubs, keep the pairs that form new simple edges,
    # re-shuffle the rejected stubs until every stub is paired or we get stuck.
    edges: set[tuple[int, int]] = set()
    stubs = np.repeat(np.arange(n), d)
    while stubs.size:
        potential: dict[int, int] = defaultdict(int)
        shuffled = rng.permutation(stubs)
        for s1, s2 in shuffled.reshape(-1, 2).tolist():
            u, v = (s1, s2) if s1 < s2 else (s2, s1)
            if u != v and (u, v) not in edges:
                edges.add((u, v))
            else:
                potential[u] += 1
                potential[v] += 1
        if not _suitable(edges, potential):
            return None
        stubs = np.repeat(np.fromiter(potential.keys(), dtype=np.int64), list(potential.values()))
    return edges


def gen_random_regular(n: int, d: int, seed: Seed, max_retries: int | None = None) -> GraphTensor:
    """Uniform-ish simple d-regular graph on n nodes."""
    if n < 1 or d < 0:
        raise InputError(f"invalid regular-graph parameters n={n}, d={d}")
    if (n * d) % 2:
        raise InputError(f"n * d must be even, got n={n}, d={d}")
    if d >= n:
        raise InputError(f"degree {d} must be smaller than n={n}")
    retries = settings.regular_max_retries if max_retries is None else max_retries

    root = seed_sequence(seed)
    for attempt in range(retries):
        # fresh, reproducible stream per attempt; does not mutate the caller's sequence
        child = np.random.SeedSequence(root.entropy, spawn_key=(*root.spawn_key, attempt))
        edges = _try_pairing(n, d, make_rng(child))
        if edges is not None:
            adjacency = np.zeros((n, n))
            for u, v in edges:
                adjacency[u, v] = adjacency[v, u] = 1.0
            return GraphTensor.from_adjacency(adjacency)
    raise GenerationError(f"no simple {d}-regular graph on {n} nodes after {retries} attempts")
