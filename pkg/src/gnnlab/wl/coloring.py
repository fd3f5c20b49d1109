"""Colorings, lexicographic relabeling and canonical multiset signatures.

Colors are carried in two forms. Compact ids (an initial segment of the
naturals) describe the partition inside one run. History tokens are 128-bit
BLAKE2b digests of the initial type and every neighborhood multiset seen so far,
so they can be compared across graphs refined for the same number of rounds.
"""

from __future__ import annotations

import hashlib
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

DIGEST_SIZE = 16


def digest(*parts: bytes) -> bytes:
    h = hashlib.blake2b(digest_size=DIGEST_SIZE)
    for part in parts:
        # length prefix keeps concatenations unambiguous
        h.update(len(part).to_bytes(8, "little"))
        h.update(part)
    return h.digest()


def multiset_digest(tokens: Iterable[bytes]) -> bytes:
    return digest(*sorted(tokens))


def value_bytes(values: np.ndarray) -> bytes:
    # + 0.0 folds -0.0 into 0.0
    return (np.asarray(values, dtype=np.float64) + 0.0).tobytes()


def _as_bytes(token) -> bytes:
    if isinstance(token, bytes):
        return token
    if isinstance(token, str):
        return token.encode()
    return repr(token).encode()


@dataclass(frozen=True)
class Signature:
    digest: bytes

    @property
    def hex(self) -> str:
        return self.digest.hex()

    def __str__(self) -> str:
        return self.hex


@dataclass(eq=False)
class Coloring:
    k: int
    n: int
    colors: np.ndarray
    tokens: tuple[bytes, ...]
    round: int = 0
    stable: bool = False
    history: list[np.ndarray] = field(default_factory=list)

    @property
    def num_classes(self) -> int:
        return int(self.colors.max()) + 1 if self.colors.size else 0

    @property
    def class_counts(self) -> list[int]:
        """Number of classes after each recorded round."""
        return [int(c.max()) + 1 for c in self.history]


def compact_ids(tokens: Sequence) -> np.ndarray:
    distinct = sorted(set(tokens))
    rank = {t: i for i, t in enumerate(distinct)}
    return np.fromiter((rank[t] for t in tokens), dtype=np.int64, count=len(tokens))


def lex_relabel(raw: Sequence, k: int = 1, n: int | None = None) -> Coloring:
    """Map tokens to their rank among the sorted distinct tokens."""
    if n is None:
        n = int(round(len(raw) ** (1.0 / k)))
    colors = compact_ids(list(raw))
    return Coloring(
        k=k,
        n=n,
        colors=colors,
        tokens=tuple(_as_bytes(t) for t in raw),
        history=[colors],
    )


def invariant_sig(c: Coloring) -> Signature:
    """Digest of the multiset of final history tokens over all tuples."""
    return Signature(digest(b"invariant", multiset_digest(c.tokens)))


def equivariant_sig(c: Coloring, k: int | None = None, n: int | None = None) -> list[Signature]:
    """Per-vertex digest over the tuples whose first index is that vertex."""
    k = c.k if k is None else k
    n = c.n if n is None else n
    block = n ** (k - 1)
    return [
        Signature(digest(b"equivariant", multiset_digest(c.tokens[i * block : (i + 1) * block])))
        for i in range(n)
    ]
