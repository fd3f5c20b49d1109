"""Separation corpora: named graph pairs with known verdicts where available."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from pydantic import BaseModel, Field

from gnnlab.errors import InputError
from gnnlab.graph.generators import gen_erdos_renyi, gen_random_regular, make_rng
from gnnlab.graph.tensor import GraphTensor, Permutation, load_graph, permute, save_graph
from gnnlab.models import CorpusSpec
from gnnlab.separation.hard_pairs import get_hard_pair

HARD = "hard"
ERDOS_RENYI = "erdos_renyi"
REGULAR = "regular"

# SeedSequence domain tags, one per generator family
_FAMILY_TAGS = {HARD: 0, ERDOS_RENYI: 1, REGULAR: 2}


class PairMeta(BaseModel):
    """Contents of meta.json next to a.json and b.json."""

    pair_id: str
    family: str
    control: bool = False
    expected: dict[str, bool] = Field(default_factory=dict)
    description: str = ""


@dataclass
class CorpusPair:
    pair_id: str
    family: str
    a: GraphTensor
    b: GraphTensor
    control: bool = False
    expected: dict[str, bool] = field(default_factory=dict)
    description: str = ""

    def __post_init__(self) -> None:
        if self.a.n != self.b.n:
            raise InputError(
                f"pair {self.pair_id}: graphs have {self.a.n} and {self.b.n} nodes; "
                "corpus pairs must share a node count"
            )

    def meta(self) -> PairMeta:
        return PairMeta(
            pair_id=self.pair_id,
            family=self.family,
            control=self.control,
            expected=self.expected,
            description=self.description,
        )


@dataclass
class Corpus:
    name: str
    pairs: list[CorpusPair]

    def __post_init__(self) -> None:
        ids = [p.pair_id for p in self.pairs]
        if len(set(ids)) != len(ids):
            raise InputError(f"corpus {self.name} has duplicate pair ids")

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    @property
    def pair_ids(self) -> list[str]:
        return [p.pair_id for p in self.pairs]

    def get(self, pair_id: str) -> CorpusPair:
        for pair in self.pairs:
            if pair.pair_id == pair_id:
                return pair
        raise InputError(f"corpus {self.name} has no pair {pair_id!r}")

    @property
    def controls(self) -> list[CorpusPair]:
        return [p for p in self.pairs if p.control]


def _stream(seed: int, family: str, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([seed, _FAMILY_TAGS[family], index])


def _control(pair_id: str, family: str, G: GraphTensor, ss: np.random.SeedSequence) -> CorpusPair:
    sigma = Permutation.random(G.n, make_rng(ss))
    expected = {"vertex": False, "wl2": False, "wl3": False, "fwl2": False, "fwl3": False}
    return CorpusPair(
        pair_id=pair_id,
        family=family,
        a=G,
        b=permute(G, sigma),
        control=True,
        expected=expected,
        description="isomorphic control (G, sigma * G)",
    )


def build_corpus(spec: CorpusSpec | None = None, name: str = "default") -> Corpus:
    """Hard pairs, random Erdos-Renyi and regular pairs, and isomorphic controls per family."""
    spec = spec or CorpusSpec()
    if spec.er_n_min > spec.er_n_max:
        raise InputError("er_n_min must not exceed er_n_max")
    pairs: list[CorpusPair] = []

    hard_graphs: list[GraphTensor] = []
    for hard_name in spec.hard_pairs:
        hard = get_hard_pair(hard_name)
        a, b = hard.graphs()
        hard_graphs.extend([a, b])
        pairs.append(
            CorpusPair(
                pair_id=hard.name,
                family=HARD,
                a=a,
                b=b,
                expected=dict(hard.expected),
                description=hard.description,
            )
        )

    er_graphs: list[GraphTensor] = []
    for i in range(spec.er_pairs):
        n_rng, a_ss, b_ss = _stream(spec.seed, ERDOS_RENYI, i).spawn(3)
        n = int(make_rng(n_rng).integers(spec.er_n_min, spec.er_n_max + 1))
        a, b = gen_erdos_renyi(n, spec.er_p, a_ss), gen_erdos_renyi(n, spec.er_p, b_ss)
        er_graphs.append(a)
        pairs.append(CorpusPair(pair_id=f"er_{i:03d}", family=ERDOS_RENYI, a=a, b=b))

    regular_graphs: list[GraphTensor] = []
    for i in range(spec.regular_pairs):
        a_ss, b_ss = _stream(spec.seed, REGULAR, i).spawn(2)
        a = gen_random_regular(spec.regular_n, spec.regular_d, a_ss)
        b = gen_random_regular(spec.regular_n, spec.regular_d, b_ss)
        regular_graphs.append(a)
        pairs.append(CorpusPair(pair_id=f"regular_{i:03d}", family=REGULAR, a=a, b=b))

    for family, pool in ((HARD, hard_graphs), (ERDOS_RENYI, er_graphs), (REGULAR, regular_graphs)):
        if not pool:
            continue
        for c in range(spec.controls_per_family):
            ss = _stream(spec.seed, family, 100_000 + c)
            pairs.append(_control(f"control_{family}_{c:02d}", family, pool[c % len(pool)], ss))

    return Corpus(name=name, pairs=pairs)


def export_corpus(corpus: Corpus, root: str | Path) -> Path:
    """Write corpus/<pair_id>/{a.json, b.json, meta.json}."""
    root = Path(root)
    for pair in corpus:
        pair_dir = root / pair.pair_id
        save_graph(pair.a, pair_dir / "a.json")
        save_graph(pair.b, pair_dir / "b.json")
        (pair_dir / "meta.json").write_text(pair.meta().model_dump_json(indent=2) + "\n")
    return root


def load_corpus_dir(root: str | Path, name: str | None = None) -> Corpus:
    root = Path(root)
    if not root.is_dir():
        raise InputError(f"corpus directory {root} does not exist")
    pairs: list[CorpusPair] = []
    for pair_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        meta_path = pair_dir / "meta.json"
        if meta_path.exists():
            try:
                meta = PairMeta.model_validate(json.loads(meta_path.read_text()))
            except ValueError as exc:
                raise InputError(f"bad meta file {meta_path}: {exc}") from exc
        else:
            meta = PairMeta(pair_id=pair_dir.name, family="file")
        pairs.append(
            CorpusPair(
                pair_id=meta.pair_id,
                family=meta.family,
                a=load_graph(pair_dir / "a.json"),
                b=load_graph(pair_dir / "b.json"),
                control=meta.control,
                expected=meta.expected,
                description=meta.description,
            )
        )
    if not pairs:
        raise InputError(f"corpus directory {root} holds no pairs")
    return Corpus(name=name or root.name, pairs=pairs)


def resolve_corpus(source: str, spec: CorpusSpec | None = None) -> Corpus:
    """'default' builds the standard corpus; anything else is a corpus directory."""
    if source == "default":
        return build_corpus(spec)
    return load_corpus_dir(source)
