"""Dense order-2 graph tensors and the node-permutation action.

A graph on n nodes with e feature channels is stored as an n x n x (e+1) array.
Channels 0..e-1 hold node features on the diagonal and are zero elsewhere; the
last channel is the symmetric 0/1 adjacency matrix with a zero diagonal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from gnnlab.errors import InputError
from gnnlab.models import GraphDocument


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GraphTensor:
    n: int
    e: int
    data: np.ndarray

    def __post_init__(self) -> None:
        if self.data.shape != (self.n, self.n, self.e + 1):
            raise InputError(
                f"graph data has shape {self.data.shape}, expected {(self.n, self.n, self.e + 1)}"
            )
        object.__setattr__(self, "data", _frozen(np.asarray(self.data, dtype=np.float64)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GraphTensor):
            return NotImplemented
        return self.n == other.n and self.e == other.e and np.array_equal(self.data, other.data)

    __hash__ = None  # type: ignore[assignment]

    @property
    def channels(self) -> int:
        return self.e + 1

    @property
    def adjacency(self) -> np.ndarray:
        return self.data[:, :, self.e]

    @property
    def features(self) -> np.ndarray:
        """n x e node features read off the diagonal."""
        idx = np.arange(self.n)
        return self.data[idx, idx, : self.e]

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    def edges(self) -> list[tuple[int, int]]:
        rows, cols = np.nonzero(np.triu(self.adjacency, k=1))
        return [(int(i), int(j)) for i, j in zip(rows, cols)]

    def neighbors(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.adjacency[i])

    @classmethod
    def from_adjacency(
        cls, adjacency: np.ndarray, features: np.ndarray | None = None
    ) -> GraphTensor:
        adjacency = np.asarray(adjacency, dtype=np.float64)
        n = adjacency.shape[0]
        e = 0 if features is None else np.asarray(features).shape[1]
        data = np.zeros((n, n, e + 1))
        data[:, :, e] = adjacency
        if features is not None:
            idx = np.arange(n)
            data[idx, idx, :e] = features
        return cls(n=n, e=e, data=data)

    def to_document(self) -> GraphDocument:
        features = self.features.tolist() if self.e else None
        return GraphDocument(n=self.n, edges=self.edges(), features=features)


@dataclass(frozen=True, eq=False)
class Permutation:
    """A bijection of {0..n-1}; `map[i]` is the image of node i."""

    map: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.map, dtype=np.int64)
        if m.ndim != 1 or not np.array_equal(np.sort(m), np.arange(m.size)):
            raise InputError("permutation map must be a bijection on 0..n-1")
        object.__setattr__(self, "map", _frozen(m))

    def __len__(self) -> int:
        return int(self.map.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return np.array_equal(self.map, other.map)

    __hash__ = None  # type: ignore[assignment]

    def __call__(self, i: int) -> int:
        return int(self.map[i])

    @property
    def n(self) -> int:
        return len(self)

    def inverse(self) -> Permutation:
        return Permutation(np.argsort(self.map))

    def compose(self, other: Permutation) -> Permutation:
        """self o other: i -> self(other(i))."""
        if len(self) != len(other):
            raise InputError("cannot compose permutations of different lengths")
        return Permutation(self.map[other.map])

    def tolist(self) -> list[int]:
        return self.map.tolist()

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(np.arange(n))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> Permutation:
        return cls(rng.permutation(n))


def encode_dense(
    n: int,
    edges: list[tuple[int, int]] | list[list[int]],
    node_features: np.ndarray | list[list[float]] | None = None,
) -> GraphTensor:
    """Encode an undirected simple graph as a dense GraphTensor."""
    if n < 1:
        raise InputError(f"node count must be positive, got {n}")
    features = None
    if node_features is not None:
        features = np.asarray(node_features, dtype=np.float64)
        if features.ndim != 2 or features.shape[0] != n:
            raise InputError(f"node features must have shape (n, e), got {features.shape}")

    adjacency = np.zeros((n, n))
    seen: set[tuple[int, int]] = set()
    for edge in edges:
        i, j = (int(v) for v in edge)
        if not (0 <= i < n and 0 <= j < n):
            raise InputError(f"edge ({i}, {j}) has an endpoint outside 0..{n - 1}")
        if i == j:
            raise InputError(f"self-loop at node {i}")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise InputError(f"duplicate edge {key}")
        seen.add(key)
        adjacency[i, j] = adjacency[j, i] = 1.0
    return GraphTensor.from_adjacency(adjacency, features)


def permute_array(data: np.ndarray, sigma: Permutation) -> np.ndarray:
    """Apply the action to the two leading node axes: out[s(i), s(j)] = data[i, j]."""
    inv = np.argsort(sigma.map)
    return data[inv][:, inv]


def permute(G: GraphTensor, sigma: Permutation) -> GraphTensor:
    if len(sigma) != G.n:
        raise InputError(f"permutation of length {len(sigma)} applied to a graph on {G.n} nodes")
    return GraphTensor(n=G.n, e=G.e, data=permute_array(G.data, sigma))


def from_document(doc: GraphDocument) -> GraphTensor:
    return encode_dense(doc.n, doc.edges, doc.features)


def load_graph(path: str | Path) -> GraphTensor:
    try:
        raw = json.loads(Path(path).read_text())
        doc = GraphDocument.model_validate(raw)
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read graph file {path}: {exc}") from exc
    return from_document(doc)


def save_graph(G: GraphTensor, path: str | Path) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(G.to_document().model_dump_json(exclude_none=True) + "\n")
