"""Correlated graph pairs for the alignment benchmark.

Each instance samples G1, applies the noise model in G1's frame, then hides
the correspondence behind a uniform random permutation sigma: G2 = sigma * noise(G1)
and node i of G1 corresponds to node sigma(i) of G2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from gnnlab.config import settings
from gnnlab.errors import InputError
from gnnlab.graph.generators import gen_erdos_renyi, gen_random_regular, make_rng
from gnnlab.graph.noise import apply_noise
from gnnlab.graph.tensor import GraphTensor, Permutation, permute
from gnnlab.models import GraphKind, TrainConfig

SPLITS = {"train": 0, "val": 1, "test": 2}


@dataclass(frozen=True)
class MatchInstance:
    g1: GraphTensor
    g2: GraphTensor
    truth: Permutation
    noise: float = 0.0
    noise_seed: np.random.SeedSequence | None = None

    def __post_init__(self) -> None:
        if self.g1.n != self.g2.n:
            raise InputError(f"instance graphs have {self.g1.n} and {self.g2.n} nodes")
        if len(self.truth) != self.g1.n:
            raise InputError("truth permutation length does not match the graphs")

    @property
    def n(self) -> int:
        return self.g1.n


@dataclass
class DatasetSplits:
    train: list[MatchInstance]
    val: list[MatchInstance]
    test: dict[float, list[MatchInstance]]


def instance_seed(seed: int, split: str, noise: float, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([seed, SPLITS[split], int(round(noise * 1e6)), index])


def make_instance(config: TrainConfig, noise: float, ss: np.random.SeedSequence) -> MatchInstance:
    size_ss, graph_ss, noise_ss, perm_ss = ss.spawn(4)
    n = int(make_rng(size_ss).integers(config.n_min, config.n_max + 1))
    pe = config.edge_density(n)
    if config.graph_kind == GraphKind.REGULAR:
        g1 = gen_random_regular(n, config.degree, graph_ss)
    else:
        g1 = gen_erdos_renyi(n, config.pe, graph_ss)
    noisy = apply_noise(g1, noise, pe, noise_ss)
    if config.identity_order:
        truth = Permutation.identity(n)
    else:
        truth = Permutation.random(n, make_rng(perm_ss))
    g2 = permute(noisy, truth)
    return MatchInstance(g1=g1, g2=g2, truth=truth, noise=noise, noise_seed=noise_ss)


def make_split(
    config: TrainConfig,
    split: str,
    noise: float,
    count: int,
    n_jobs: int | None = None,
) -> list[MatchInstance]:
    if split not in SPLITS:
        raise InputError(f"unknown split {split!r}")
    from joblib import Parallel, delayed

    return Parallel(n_jobs=n_jobs or settings.n_jobs)(
        delayed(make_instance)(config, noise, instance_seed(config.seed, split, noise, i))
        for i in range(count)
    )


def make_dataset(config: TrainConfig, n_jobs: int | None = None) -> DatasetSplits:
    """Train and val at the training noise level, one test list per evaluation level."""
    return DatasetSplits(
        train=make_split(config, "train", config.train_noise, config.n_train, n_jobs),
        val=make_split(config, "val", config.train_noise, config.n_val, n_jobs),
        test={
            level: make_split(config, "test", level, config.n_test, n_jobs)
            for level in config.eval_noise_levels
        },
    )
