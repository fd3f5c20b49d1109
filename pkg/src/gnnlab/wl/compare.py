"""Cross-graph comparison of refinement tests.

Two graphs are refined in lockstep, which is the same as refining their
disjoint union: at every round the multisets of history tokens are compared,
and the loop ends once the joint partition stops splitting.
"""

from __future__ import annotations

from dataclasses import dataclass

from gnnlab.errors import InputError
from gnnlab.graph.tensor import GraphTensor
from gnnlab.models import TestName
from gnnlab.wl.base import RefinementTest
from gnnlab.wl.coloring import compact_ids, invariant_sig, multiset_digest
from gnnlab.wl.tuples import KFWL, KWL
from gnnlab.wl.vertex import VertexWL


def get_test(name: TestName | str, max_entries: int | None = None) -> RefinementTest:
    name = TestName(name)
    if name == TestName.VERTEX_WL:
        return VertexWL(max_entries)
    family, k = name.value[:-1], int(name.value[-1])
    if family == "wl":
        return KWL(k, max_entries)
    if family == "fwl":
        return KFWL(k, max_entries)
    raise InputError(f"unknown test {name}")  # pragma: no cover


@dataclass
class Comparison:
    test: str
    separated: bool
    rounds_a: int
    rounds_b: int
    signature_a: str
    signature_b: str


def _separated(
    test: RefinementTest, G: GraphTensor, H: GraphTensor, max_rounds: int | None
) -> bool:
    if G.n != H.n:
        return True
    tg, th = test.initial_tokens(G), test.initial_tokens(H)
    classes = int(compact_ids(tg + th).max())
    rounds = 0
    while True:
        if multiset_digest(tg) != multiset_digest(th):
            return True
        if max_rounds is not None and rounds >= max_rounds:
            return False
        tg, th = test.step(G, tg), test.step(H, th)
        joint = int(compact_ids(tg + th).max())
        if joint == classes:
            return False
        classes = joint
        rounds += 1


def distinguishes(
    test: RefinementTest | TestName | str,
    G: GraphTensor,
    H: GraphTensor,
    max_rounds: int | None = None,
) -> bool:
    """True iff the test tells G and H apart (their invariant signatures differ)."""
    if not isinstance(test, RefinementTest):
        test = get_test(test)
    test.check_capacity(max(G.n, H.n))
    return _separated(test, G, H, max_rounds)


def compare(
    test: RefinementTest | TestName | str,
    G: GraphTensor,
    H: GraphTensor,
    max_rounds: int | None = None,
) -> Comparison:
    """Verdict plus per-graph stable round counts and signatures."""
    if not isinstance(test, RefinementTest):
        test = get_test(test)
    ca, cb = test.run(G, max_rounds), test.run(H, max_rounds)
    return Comparison(
        test=test.name,
        separated=distinguishes(test, G, H, max_rounds),
        rounds_a=ca.round,
        rounds_b=cb.round,
        signature_a=invariant_sig(ca).hex,
        signature_b=invariant_sig(cb).hex,
    )
