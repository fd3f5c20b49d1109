"""Graph data model, permutation action, generators, noise model and masked batching."""

from gnnlab.graph.batching import MaskedBatch, make_masked_batch
from gnnlab.graph.generators import gen_erdos_renyi, gen_random_regular, make_rng
from gnnlab.graph.noise import apply_noise, noise_p2
from gnnlab.graph.tensor import GraphTensor, Permutation, encode_dense, permute

__all__ = [
    "GraphTensor",
    "MaskedBatch",
    "Permutation",
    "apply_noise",
    "encode_dense",
    "gen_erdos_renyi",
    "gen_random_regular",
    "make_masked_batch",
    "make_rng",
    "noise_p2",
    "permute",
]
