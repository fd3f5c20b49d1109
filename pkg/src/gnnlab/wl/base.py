"""Abstract base class for all refinement tests."""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod

from gnnlab.config import settings
from gnnlab.errors import CapacityError
from gnnlab.graph.tensor import GraphTensor
from gnnlab.logging_.schemas import RefinementLogEvent
from gnnlab.logging_.structured_logger import log_event
from gnnlab.wl.coloring import Coloring, compact_ids


class RefinementTest(ABC):
    """Color refinement over k-tuples of vertices.

    Subclasses provide the initial history tokens and one refinement step;
    this class drives the loop to a stable partition.
    """

    name: str = ""
    k: int = 1

    def __init__(self, max_entries: int | None = None):
        self.max_entries = settings.wl_max_entries if max_entries is None else max_entries

    def check_capacity(self, n: int) -> None:
        if n**self.k > self.max_entries:
            raise CapacityError(
                f"{self.name}: table of {n}^{self.k} entries exceeds budget {self.max_entries}"
            )

    @abstractmethod
    def initial_tokens(self, G: GraphTensor) -> list[bytes]:
        """History tokens before any refinement, one per tuple in row-major order."""
        ...

    @abstractmethod
    def step(self, G: GraphTensor, tokens: list[bytes]) -> list[bytes]:
        """One refinement round. Every new token must encode the old one."""
        ...

    def run(self, G: GraphTensor, max_rounds: int | None = None) -> Coloring:
        self.check_capacity(G.n)
        if max_rounds is None:
            max_rounds = settings.wl_max_rounds

        tokens = self.initial_tokens(G)
        colors = compact_ids(tokens)
        history = [colors]
        rounds = 0
        stable = False
        while max_rounds is None or rounds < max_rounds:
            new_tokens = self.step(G, tokens)
            new_colors = compact_ids(new_tokens)
            # new tokens refine the old ones, so an equal class count means the same partition
            if new_colors.max() == colors.max():
                stable = True
                break
            tokens, colors = new_tokens, new_colors
            history.append(colors)
            rounds += 1

        coloring = Coloring(
            k=self.k,
            n=G.n,
            colors=colors,
            tokens=tuple(tokens),
            round=rounds,
            stable=stable,
            history=history,
        )
        log_event(
            RefinementLogEvent.from_coloring(self.name, coloring),
            "gnnlab.wl",
            f"{self.name}: {coloring.num_classes} classes after {rounds} rounds",
            level=logging.DEBUG,
        )
        return coloring
