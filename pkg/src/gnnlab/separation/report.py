"""Separation reports for refinement tests and random-weight GNN families."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from pathlib import Path

import numpy as np
from pydantic import BaseModel, Field

from gnnlab.config import settings
from gnnlab.errors import InputError, PropertyViolation
from gnnlab.gnn.model import forward_numpy, init_params
from gnnlab.graph.tensor import GraphTensor
from gnnlab.logging_.schemas import SeparationLogEvent
from gnnlab.logging_.structured_logger import get_logger, log_event
from gnnlab.models import ModelFamily, ModelSpec, TestName, Variant
from gnnlab.separation.corpus import Corpus
from gnnlab.wl.compare import distinguishes, get_test

logger = get_logger("gnnlab.separation")

REPORT_COLUMNS = ["pair_id", "discriminator", "separated", "gap", "seeds"]

# the refinement test bounding each family's separating power
WL_BOUND = {
    ModelFamily.MGNN: TestName.VERTEX_WL,
    ModelFamily.LGNN2: TestName.WL2,
    ModelFamily.FGNN2: TestName.FWL2,
}


class SeparationRow(BaseModel):
    pair_id: str
    discriminator: str
    separated: bool
    gap: float = 0.0
    seeds: int = 0


class SeparationReport(BaseModel):
    corpus: str
    pair_ids: list[str]
    rows: list[SeparationRow] = Field(default_factory=list)

    @property
    def discriminators(self) -> list[str]:
        return sorted({r.discriminator for r in self.rows})

    def _resolve(self, discriminator: str | None) -> str:
        names = self.discriminators
        if discriminator is None:
            if len(names) != 1:
                raise InputError(f"report holds several discriminators {names}; name one")
            return names[0]
        if discriminator not in names:
            raise InputError(f"report has no discriminator {discriminator!r}; has {names}")
        return discriminator

    def verdicts(self, discriminator: str | None = None) -> dict[str, bool]:
        name = self._resolve(discriminator)
        return {r.pair_id: r.separated for r in self.rows if r.discriminator == name}

    def separated_ids(self, discriminator: str | None = None) -> list[str]:
        return [pid for pid, sep in self.verdicts(discriminator).items() if sep]

    def merge(self, other: SeparationReport) -> SeparationReport:
        if self.pair_ids != other.pair_ids:
            raise InputError("cannot merge reports over different corpora")
        rows = self.rows + other.rows
        return SeparationReport(corpus=self.corpus, pair_ids=self.pair_ids, rows=rows)

    def to_dataframe(self):
        import pandas as pd

        frame = pd.DataFrame([r.model_dump() for r in self.rows], columns=REPORT_COLUMNS)
        return frame.sort_values(["pair_id", "discriminator"], kind="mergesort").reset_index(
            drop=True
        )

    def to_csv(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_dataframe().to_csv(path, index=False, float_format="%.6e")
        return path


def _log_rows(rows: Sequence[SeparationRow]) -> None:
    for row in rows:
        log_event(SeparationLogEvent.from_row(row), "gnnlab.separation", "pair", logging.DEBUG)


def wl_separation_report(
    corpus: Corpus,
    tests: Sequence[TestName | str],
    max_entries: int | None = None,
    n_jobs: int | None = None,
) -> SeparationReport:
    """Run `distinguishes` for every test on every pair."""
    from joblib import Parallel, delayed

    discriminators = [get_test(t, max_entries) for t in tests]
    jobs = [(test, pair) for test in discriminators for pair in corpus]
    verdicts = Parallel(n_jobs=n_jobs or settings.n_jobs)(
        delayed(distinguishes)(test, pair.a, pair.b) for test, pair in jobs
    )
    rows = [
        SeparationRow(pair_id=pair.pair_id, discriminator=test.name, separated=bool(v))
        for (test, pair), v in zip(jobs, verdicts)
    ]
    _log_rows(rows)
    return SeparationReport(corpus=corpus.name, pair_ids=corpus.pair_ids, rows=rows)


def default_template(
    family: ModelFamily | str, variant: Variant | str = Variant.INVARIANT
) -> ModelSpec:
    """Random-weight model: four message-passing layers or three order-2 layers, width 16."""
    family = ModelFamily(family)
    depth = 4 if family == ModelFamily.MGNN else 3
    return ModelSpec(
        family=family,
        variant=Variant(variant),
        layer_widths=[16] * depth,
        mlp_hidden=16,
        mlp_depth=2,
        out_width=8,
    )


def discriminator_name(template: ModelSpec) -> str:
    return f"{template.family.value}_{template.variant.value}"


def seed_for(run_seed: int, index: int) -> int:
    return int(np.random.SeedSequence([run_seed, index]).generate_state(1)[0])


def canonical_output(out: np.ndarray) -> np.ndarray:
    """Invariant outputs as they are; equivariant rows sorted lexicographically."""
    if out.ndim == 1:
        return out
    order = np.lexsort(out.T[::-1])
    return out[order].ravel()


def output_gap(a: np.ndarray, b: np.ndarray) -> float:
    """|a - b|_inf relative to max(1, |a|_inf, |b|_inf)."""
    if a.shape != b.shape:
        return float("inf")
    scale = max(1.0, float(np.abs(a).max(initial=0.0)), float(np.abs(b).max(initial=0.0)))
    return float(np.abs(a - b).max(initial=0.0)) / scale


def _pair_gap(template: ModelSpec, a: GraphTensor, b: GraphTensor, seeds: list[int]) -> float:
    spec = template.model_copy(update={"in_channels": a.channels})
    gap = 0.0
    for seed in seeds:
        params = init_params(spec, seed)
        out_a = canonical_output(forward_numpy(spec, a, params))
        out_b = canonical_output(forward_numpy(spec, b, params))
        gap = max(gap, output_gap(out_a, out_b))
    return gap


def gnn_separation_report(
    corpus: Corpus,
    template: ModelSpec,
    seeds: int | None = None,
    tol: float | None = None,
    seed: int | None = None,
    n_jobs: int | None = None,
) -> SeparationReport:
    """A pair is separated iff some seeded random-weight model's outputs differ by more than tol."""
    from joblib import Parallel, delayed

    seeds = settings.separation_seeds if seeds is None else seeds
    tol = settings.separation_tol if tol is None else tol
    run_seed = settings.default_seed if seed is None else seed
    if seeds < 1:
        raise InputError("need at least one seed")
    model_seeds = [seed_for(run_seed, s) for s in range(seeds)]

    gaps = Parallel(n_jobs=n_jobs or settings.n_jobs)(
        delayed(_pair_gap)(template, pair.a, pair.b, model_seeds) for pair in corpus
    )
    name = discriminator_name(template)
    rows = [
        SeparationRow(pair_id=p.pair_id, discriminator=name, separated=g > tol, gap=g, seeds=seeds)
        for p, g in zip(corpus, gaps)
    ]
    _log_rows(rows)
    return SeparationReport(corpus=corpus.name, pair_ids=corpus.pair_ids, rows=rows)


def check_inclusion(
    report_a: SeparationReport,
    report_b: SeparationReport,
    discriminator_a: str | None = None,
    discriminator_b: str | None = None,
) -> list[str]:
    """Pairs separated by A's discriminator but not by B's; empty certifies sep(A) in sep(B)."""
    if report_a.pair_ids != report_b.pair_ids:
        raise InputError(
            f"reports cover different corpora ({report_a.corpus!r} vs {report_b.corpus!r})"
        )
    sep_a = report_a.verdicts(discriminator_a)
    sep_b = report_b.verdicts(discriminator_b)
    return [pid for pid in report_a.pair_ids if sep_a.get(pid) and not sep_b.get(pid)]


def soundness_violations(
    gnn_report: SeparationReport, wl_report: SeparationReport, bound: str
) -> list[str]:
    """Pairs a GNN separates although its bounding refinement test does not."""
    return check_inclusion(gnn_report, wl_report, discriminator_b=bound)


def assert_sound(gnn_report: SeparationReport, wl_report: SeparationReport, bound: str) -> None:
    violations = soundness_violations(gnn_report, wl_report, bound)
    if violations:
        logger.error("soundness violated on %d pairs: %s", len(violations), violations[:10])
        raise PropertyViolation(
            f"{gnn_report.discriminators[0]} separates {len(violations)} pairs "
            f"that {bound} does not: {violations[:10]}"
        )


def completeness_rate(
    gnn_report: SeparationReport, wl_report: SeparationReport, bound: str
) -> float:
    """Share of test-separated pairs that the GNN family also separates."""
    wl_sep = wl_report.separated_ids(bound)
    if not wl_sep:
        return 1.0
    gnn_sep = set(gnn_report.separated_ids())
    return sum(pid in gnn_sep for pid in wl_sep) / len(wl_sep)


def expected_mismatches(corpus: Corpus, wl_report: SeparationReport) -> list[tuple[str, str]]:
    """(pair_id, test) where a recorded expected verdict disagrees with the run."""
    mismatches = []
    for name in wl_report.discriminators:
        verdicts = wl_report.verdicts(name)
        for pair in corpus:
            if name in pair.expected and pair.expected[name] != verdicts[pair.pair_id]:
                mismatches.append((pair.pair_id, name))
    return mismatches


def family_bound(template: ModelSpec) -> TestName:
    return WL_BOUND[template.family]
