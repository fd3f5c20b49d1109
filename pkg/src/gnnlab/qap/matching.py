"""Decoding similarity matrices into node matchings, and the accuracy metric."""

from __future__ import annotations

import numpy as np

from gnnlab.errors import InputError
from gnnlab.graph.tensor import GraphTensor, Permutation


def _check_scores(S) -> np.ndarray:
    S = np.asarray(S, dtype=np.float64)
    if S.ndim != 2 or S.shape[0] != S.shape[1] or S.shape[0] == 0:
        raise InputError(f"score matrix must be square and non-empty, got shape {S.shape}")
    if not np.isfinite(S).all():
        raise InputError("score matrix has non-finite entries")
    return S


def hungarian_lap(S) -> Permutation:
    """Permutation pi maximizing sum_i S[i, pi(i)].

    Kuhn-Munkres with row/column potentials on the cost max(S) - S, O(n^3).
    Among equally good columns the lowest index is taken.
    """
    S = _check_scores(S)
    n = S.shape[0]
    cost = S.max() - S
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    match = np.zeros(n + 1, dtype=np.int64)  # match[j]: row (1-based) holding column j
    way = np.zeros(n + 1, dtype=np.int64)

    for row in range(1, n + 1):
        match[0] = row
        j0 = 0
        minv = np.full(n + 1, np.inf)
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = match[j0]
            reduced = cost[i0 - 1] - u[i0] - v[1:]
            free = ~used[1:]
            better = free & (reduced < minv[1:])
            minv[1:][better] = reduced[better]
            way[1:][better] = j0
            candidates = np.where(free, minv[1:], np.inf)
            j1 = int(np.argmin(candidates)) + 1
            delta = candidates[j1 - 1]
            u[match[used]] += delta
            v[used] -= delta
            minv[1:][free] -= delta
            j0 = j1
            if match[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            match[j0] = match[j1]
            j0 = j1

    assignment = np.empty(n, dtype=np.int64)
    assignment[match[1:] - 1] = np.arange(n)
    return Permutation(assignment)


def row_argmax(S) -> np.ndarray:
    """Independent best column per row; not necessarily a permutation."""
    return np.argmax(_check_scores(S), axis=1)


def assignment_objective(S, pi: Permutation | np.ndarray) -> float:
    S = _check_scores(S)
    cols = pi.map if isinstance(pi, Permutation) else np.asarray(pi)
    return float(S[np.arange(S.shape[0]), cols].sum())


def node_accuracy(pred: Permutation | np.ndarray, truth: Permutation | np.ndarray) -> float:
    """Fraction of nodes i with pred(i) == truth(i)."""
    p = pred.map if isinstance(pred, Permutation) else np.asarray(pred)
    t = truth.map if isinstance(truth, Permutation) else np.asarray(truth)
    if p.shape != t.shape:
        raise InputError(f"prediction of length {len(p)} against truth of length {len(t)}")
    if len(t) == 0:
        raise InputError("cannot score an empty matching")
    return float(np.mean(p == t))


def _profiles(G: GraphTensor) -> list[tuple[int, tuple[int, ...]]]:
    deg = G.degrees.astype(np.int64)
    return [(int(deg[i]), tuple(sorted(int(d) for d in deg[G.neighbors(i)]))) for i in range(G.n)]


def degree_profile_baseline(inst) -> Permutation:
    """Match nodes in order of (degree, sorted neighbor degrees), ties broken by index."""
    p1, p2 = _profiles(inst.g1), _profiles(inst.g2)
    order1 = sorted(range(inst.n), key=lambda i: (p1[i], i))
    order2 = sorted(range(inst.n), key=lambda i: (p2[i], i))
    assignment = np.empty(inst.n, dtype=np.int64)
    assignment[order1] = order2
    return Permutation(assignment)
