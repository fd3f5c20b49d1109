"""The Weisfeiler-Lehman hierarchy: vertex refinement, k-WL, k-FWL and signatures."""

from gnnlab.wl.base import RefinementTest
from gnnlab.wl.coloring import (
    Coloring,
    Signature,
    equivariant_sig,
    invariant_sig,
    lex_relabel,
)
from gnnlab.wl.compare import Comparison, compare, distinguishes, get_test
from gnnlab.wl.tuples import KFWL, KWL, TypeId, iso_type, k_fwl, k_wl
from gnnlab.wl.vertex import VertexWL, vertex_wl

__all__ = [
    "KFWL",
    "KWL",
    "Coloring",
    "Comparison",
    "RefinementTest",
    "Signature",
    "TypeId",
    "VertexWL",
    "compare",
    "distinguishes",
    "equivariant_sig",
    "get_test",
    "invariant_sig",
    "iso_type",
    "k_fwl",
    "k_wl",
    "lex_relabel",
    "vertex_wl",
]
