"""Tests for vertex and tuple color refinement, with networkx as an oracle for the vertex test."""

import networkx as nx
import numpy as np
import pytest

from gnnlab.errors import CapacityError, InputError
from gnnlab.graph.generators import gen_erdos_renyi, gen_random_regular, make_rng
from gnnlab.graph.tensor import GraphTensor, Permutation, encode_dense, permute
from gnnlab.models import TestName
from gnnlab.separation.hard_pairs import get_hard_pair
from gnnlab.wl.coloring import equivariant_sig, invariant_sig, lex_relabel
from gnnlab.wl.compare import compare, distinguishes, get_test
from gnnlab.wl.tuples import iso_type, k_fwl, k_wl, neighbor_table
from gnnlab.wl.vertex import vertex_wl


def _nx(G: GraphTensor) -> nx.Graph:
    return nx.from_numpy_array(G.adjacency)


def _nx_hash(G: GraphTensor) -> str:
    return nx.weisfeiler_lehman_graph_hash(_nx(G), iterations=G.n + 1)


class TestColoring:
    def test_lex_relabel_ranks(self):
        c = lex_relabel([b"b", b"a", b"b", b"c"])
        assert c.colors.tolist() == [1, 0, 1, 2]
        assert c.num_classes == 3

    def test_signature_ignores_order(self):
        a = lex_relabel([b"x", b"y", b"y"])
        b = lex_relabel([b"y", b"x", b"y"])
        assert invariant_sig(a) == invariant_sig(b)


class TestVertexWL:
    def test_path_partition(self):
        P4 = encode_dense(4, [(0, 1), (1, 2), (2, 3)])
        c = vertex_wl(P4)
        assert c.stable
        assert c.colors[0] == c.colors[3]
        assert c.colors[1] == c.colors[2]
        assert c.colors[0] != c.colors[1]

    def test_regular_graph_single_class(self, c6):
        c = vertex_wl(c6)
        assert c.num_classes == 1
        assert c.round == 0

    def test_features_split_classes(self):
        G = encode_dense(3, [(0, 1), (1, 2), (0, 2)], [[0.0], [0.0], [1.0]])
        assert vertex_wl(G).num_classes == 2

    def test_max_rounds(self):
        P6 = encode_dense(6, [(i, i + 1) for i in range(5)])
        assert vertex_wl(P6, max_rounds=1).round == 1
        assert vertex_wl(P6).num_classes == 3

    def test_class_counts_increase(self):
        G = gen_erdos_renyi(10, 0.3, 4)
        counts = vertex_wl(G).class_counts
        assert counts == sorted(counts)
        assert len(set(counts)) == len(counts)

    @pytest.mark.parametrize("seed", range(12))
    def test_agrees_with_networkx_hash(self, seed):
        rng = make_rng(seed)
        n = int(rng.integers(4, 9))
        G = gen_erdos_renyi(n, 0.4, int(rng.integers(2**31)))
        H = gen_erdos_renyi(n, 0.4, int(rng.integers(2**31)))
        assert distinguishes("vertex", G, H) == (_nx_hash(G) != _nx_hash(H))

    def test_isomorphic_pair_not_separated(self):
        G = gen_erdos_renyi(9, 0.4, 1)
        H = permute(G, Permutation.random(9, make_rng(2)))
        assert not distinguishes("vertex", G, H)

    def test_different_sizes_separated(self, c6):
        assert distinguishes("vertex", c6, encode_dense(5, []))


class TestTupleTests:
    def test_neighbor_table(self):
        table = neighbor_table(3, 2)
        # tuple (1, 2) has index 5; replacing position 0 gives (j, 2)
        assert table[0][5] == [2, 5, 8]
        assert table[1][5] == [3, 4, 5]

    def test_iso_type_pattern(self, c6):
        assert iso_type(c6, (0, 1)) == iso_type(c6, (1, 2))
        assert iso_type(c6, (0, 1)) != iso_type(c6, (0, 2))
        assert iso_type(c6, (0, 0)) != iso_type(c6, (0, 1))

    def test_iso_type_bad_index(self, c6):
        with pytest.raises(InputError):
            iso_type(c6, (0, 6))

    def test_order_below_two(self):
        with pytest.raises(InputError):
            k_wl(encode_dense(3, []), 1)

    def test_capacity(self):
        G = gen_erdos_renyi(6, 0.5, 0)
        with pytest.raises(CapacityError):
            get_test("fwl3", max_entries=100).run(G)

    def test_fwl2_refines_vertex(self):
        G = gen_erdos_renyi(7, 0.4, 3)
        assert k_fwl(G, 2).num_classes >= vertex_wl(G).num_classes

    def test_names(self):
        assert [get_test(t).name for t in TestName] == ["vertex", "wl2", "wl3", "fwl2", "fwl3"]


TUPLE_RUNS = {"wl2": lambda G: k_wl(G, 2), "fwl2": lambda G: k_fwl(G, 2)}


class TestSignatures:
    @pytest.mark.parametrize("test", sorted(TUPLE_RUNS))
    def test_invariant_under_relabeling(self, test):
        run = TUPLE_RUNS[test]
        G = gen_erdos_renyi(6, 0.4, 11)
        reference = invariant_sig(run(G))
        rng = make_rng(12)
        for _ in range(100):
            sigma = Permutation.random(6, rng)
            assert invariant_sig(run(permute(G, sigma))) == reference

    @pytest.mark.parametrize("test", sorted(TUPLE_RUNS))
    def test_empty_graph_differs_from_triangle(self, test):
        run = TUPLE_RUNS[test]
        empty, K3 = encode_dense(3, []), encode_dense(3, [(0, 1), (1, 2), (0, 2)])
        assert invariant_sig(run(empty)) != invariant_sig(run(K3))

    @pytest.mark.parametrize("test", sorted(TUPLE_RUNS))
    def test_vertex_transitive_graph_has_one_vertex_digest(self, test, c6):
        sigs = equivariant_sig(TUPLE_RUNS[test](c6))
        assert len(sigs) == 6
        assert len(set(sigs)) == 1

    @pytest.mark.parametrize("test", sorted(TUPLE_RUNS))
    def test_path_endpoints_match(self, test):
        P3 = encode_dense(3, [(0, 1), (1, 2)])
        sigs = equivariant_sig(TUPLE_RUNS[test](P3), 2, 3)
        assert sigs[0] == sigs[2]
        assert sigs[0] != sigs[1]

    @pytest.mark.parametrize("test", sorted(TUPLE_RUNS))
    def test_vertex_digests_follow_the_relabeling(self, test):
        run = TUPLE_RUNS[test]
        G = encode_dense(7, [(0, 1), (1, 2), (2, 3), (3, 4), (1, 5), (5, 6), (0, 5)])
        sigs = equivariant_sig(run(G))
        assert len(set(sigs)) > 1
        rng = make_rng(14)
        for _ in range(20):
            sigma = Permutation.random(7, rng)
            moved = equivariant_sig(run(permute(G, sigma)))
            assert all(moved[sigma(i)] == sigs[i] for i in range(7))


class TestHardPairs:
    def test_cycle_pair(self, c6, two_c3):
        assert not distinguishes("vertex", c6, two_c3)
        assert not distinguishes("wl2", c6, two_c3)
        assert distinguishes("fwl2", c6, two_c3)
        assert distinguishes("wl3", c6, two_c3)

    def test_cycle_pair_matches_networkx(self, c6, two_c3):
        assert _nx_hash(c6) == _nx_hash(two_c3)
        assert not nx.is_isomorphic(_nx(c6), _nx(two_c3))

    def test_strongly_regular_pair(self):
        rook, shrikhande = get_hard_pair("rook_vs_shrikhande").graphs()
        assert rook.degrees.tolist() == [6] * 16
        assert shrikhande.degrees.tolist() == [6] * 16
        assert not nx.is_isomorphic(_nx(rook), _nx(shrikhande))
        assert not distinguishes("fwl2", rook, shrikhande)

    def test_unknown_pair(self):
        with pytest.raises(InputError):
            get_hard_pair("petersen")

    @pytest.mark.parametrize("test", ["vertex", "wl2", "wl3", "fwl2"])
    def test_isomorphic_regular_pair(self, test):
        G = gen_random_regular(8, 3, 1)
        H = permute(G, Permutation.random(8, make_rng(5)))
        assert not distinguishes(test, G, H)


class TestCompare:
    def test_signatures(self, c6, two_c3):
        result = compare("fwl2", c6, two_c3)
        assert result.separated
        assert result.signature_a != result.signature_b

    def test_unseparated_signatures_equal(self, c6, two_c3):
        result = compare("vertex", c6, two_c3)
        assert not result.separated
        assert result.signature_a == result.signature_b

    def test_unknown_test(self, c6):
        with pytest.raises(ValueError):
            compare("wl9", c6, c6)

    def test_max_rounds_zero(self):
        P4 = encode_dense(4, [(0, 1), (1, 2), (2, 3)])
        star = encode_dense(4, [(0, 1), (0, 2), (0, 3)])
        assert not distinguishes("vertex", P4, star, max_rounds=0)
        assert distinguishes("vertex", P4, star)

    def test_matches_refinement_of_disjoint_union(self):
        G = gen_erdos_renyi(6, 0.5, 8)
        H = gen_erdos_renyi(6, 0.5, 9)
        union = np.zeros((12, 12))
        union[:6, :6], union[6:, 6:] = G.adjacency, H.adjacency
        colors = vertex_wl(GraphTensor.from_adjacency(union)).colors
        same = sorted(colors[:6].tolist()) == sorted(colors[6:].tolist())
        assert distinguishes("vertex", G, H) == (not same)
