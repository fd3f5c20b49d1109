"""Tests for the corpus, separation reports and the inclusion checks."""

import numpy as np
import pytest

from gnnlab.errors import InputError, PropertyViolation
from gnnlab.graph.tensor import encode_dense
from gnnlab.models import CorpusSpec, ModelFamily, TestName, Variant
from gnnlab.separation.corpus import (
    Corpus,
    CorpusPair,
    build_corpus,
    export_corpus,
    load_corpus_dir,
    resolve_corpus,
)
from gnnlab.separation.report import (
    SeparationReport,
    SeparationRow,
    assert_sound,
    canonical_output,
    check_inclusion,
    completeness_rate,
    default_template,
    expected_mismatches,
    family_bound,
    gnn_separation_report,
    output_gap,
    wl_separation_report,
)

TINY = CorpusSpec(er_pairs=4, regular_pairs=2, regular_n=8, controls_per_family=1, seed=3)
HARD_ONLY = CorpusSpec(hard_pairs=["c6_vs_2c3"], er_pairs=0, regular_pairs=0, controls_per_family=1)


def _report(verdicts: dict[str, bool], name: str, pair_ids=None) -> SeparationReport:
    rows = [SeparationRow(pair_id=p, discriminator=name, separated=v) for p, v in verdicts.items()]
    return SeparationReport(corpus="t", pair_ids=pair_ids or list(verdicts), rows=rows)


class TestCorpus:
    def test_pair_ids(self):
        corpus = build_corpus(TINY)
        assert corpus.pair_ids == [
            "c6_vs_2c3",
            "rook_vs_shrikhande",
            "er_000",
            "er_001",
            "er_002",
            "er_003",
            "regular_000",
            "regular_001",
            "control_hard_00",
            "control_erdos_renyi_00",
            "control_regular_00",
        ]

    def test_reproducible(self):
        a, b = build_corpus(TINY), build_corpus(TINY)
        assert all(pa.a == pb.a and pa.b == pb.b for pa, pb in zip(a, b))

    def test_pairs_have_equal_sizes(self):
        for pair in build_corpus(TINY):
            assert pair.a.n == pair.b.n

    def test_controls_expect_no_separation(self):
        corpus = build_corpus(TINY)
        assert len(corpus.controls) == 3
        assert all(not any(p.expected.values()) for p in corpus.controls)

    def test_unequal_sizes_rejected(self, c6):
        with pytest.raises(InputError):
            CorpusPair(pair_id="x", family="file", a=c6, b=encode_dense(5, []))

    def test_duplicate_ids_rejected(self, c6):
        pair = CorpusPair(pair_id="x", family="file", a=c6, b=c6)
        with pytest.raises(InputError):
            Corpus(name="dup", pairs=[pair, pair])

    def test_export_and_reload(self, tmp_path):
        corpus = build_corpus(TINY)
        export_corpus(corpus, tmp_path / "corpus")
        loaded = load_corpus_dir(tmp_path / "corpus")
        assert sorted(loaded.pair_ids) == sorted(corpus.pair_ids)
        original = corpus.get("er_002")
        reloaded = loaded.get("er_002")
        assert reloaded.a == original.a and reloaded.b == original.b
        assert loaded.get("c6_vs_2c3").expected["fwl2"] is True

    def test_missing_directory(self, tmp_path):
        with pytest.raises(InputError):
            load_corpus_dir(tmp_path / "nope")

    def test_resolve(self, tmp_path):
        assert resolve_corpus("default", HARD_ONLY).pair_ids == ["c6_vs_2c3", "control_hard_00"]
        export_corpus(build_corpus(HARD_ONLY), tmp_path)
        assert len(resolve_corpus(str(tmp_path))) == 2


class TestWLReport:
    def test_hard_pair_verdicts(self):
        corpus = build_corpus(HARD_ONLY)
        report = wl_separation_report(corpus, ["vertex", "wl2", "fwl2"])
        assert report.verdicts("vertex")["c6_vs_2c3"] is False
        assert report.verdicts("wl2")["c6_vs_2c3"] is False
        assert report.verdicts("fwl2")["c6_vs_2c3"] is True
        assert report.separated_ids("fwl2") == ["c6_vs_2c3"]
        assert expected_mismatches(corpus, report) == []

    def test_hierarchy_on_random_pairs(self):
        corpus = build_corpus(TINY)
        report = wl_separation_report(corpus, ["vertex", "wl2", "wl3", "fwl2"])
        assert check_inclusion(report, report, "vertex", "fwl2") == []
        # 2-WL and vertex refinement have the same power
        assert report.verdicts("vertex") == report.verdicts("wl2")
        assert report.verdicts("wl3") == report.verdicts("fwl2")

    def test_controls_never_separated(self):
        corpus = build_corpus(TINY)
        report = wl_separation_report(corpus, ["vertex", "fwl2"])
        for pair in corpus.controls:
            assert not report.verdicts("fwl2")[pair.pair_id]

    def test_csv_columns(self, tmp_path):
        report = wl_separation_report(build_corpus(HARD_ONLY), ["vertex"])
        text = report.to_csv(tmp_path / "wl.csv").read_text().splitlines()
        assert text[0] == "pair_id,discriminator,separated,gap,seeds"
        assert len(text) == 3

    def test_ambiguous_discriminator(self):
        report = wl_separation_report(build_corpus(HARD_ONLY), ["vertex", "fwl2"])
        with pytest.raises(InputError):
            report.verdicts()


class TestGNNReport:
    def test_canonical_output_sorts_rows(self):
        out = np.array([[2.0, 1.0], [1.0, 5.0], [1.0, 3.0]])
        assert canonical_output(out).tolist() == [1.0, 3.0, 1.0, 5.0, 2.0, 1.0]

    def test_output_gap(self):
        assert output_gap(np.array([10.0]), np.array([10.5])) == pytest.approx(0.5 / 10.5)
        assert output_gap(np.array([0.1]), np.array([0.2])) == pytest.approx(0.1)

    def test_bounds(self):
        assert family_bound(default_template("mgnn")) == TestName.VERTEX_WL
        assert family_bound(default_template("lgnn2")) == TestName.WL2
        assert family_bound(default_template("fgnn2")) == TestName.FWL2

    @pytest.mark.parametrize("variant", list(Variant))
    def test_folklore_separates_cycle_pair(self, variant):
        corpus = build_corpus(HARD_ONLY)
        template = default_template(ModelFamily.FGNN2, variant)
        report = gnn_separation_report(corpus, template, seeds=3, tol=1e-4, seed=0)
        verdicts = report.verdicts()
        assert verdicts["c6_vs_2c3"] is True
        assert verdicts["control_hard_00"] is False

    def test_message_passing_is_sound(self):
        corpus = build_corpus(HARD_ONLY)
        template = default_template(ModelFamily.MGNN, Variant.EQUIVARIANT)
        gnn = gnn_separation_report(corpus, template, seeds=2, tol=1e-4, seed=0)
        wl = wl_separation_report(corpus, ["vertex"])
        assert gnn.verdicts()["c6_vs_2c3"] is False
        assert_sound(gnn, wl, "vertex")
        assert completeness_rate(gnn, wl, "vertex") == 1.0

    def test_needs_a_seed(self):
        with pytest.raises(InputError):
            gnn_separation_report(build_corpus(HARD_ONLY), default_template("mgnn"), seeds=0)


class TestInclusion:
    def test_violation_detected(self):
        gnn = _report({"p": True, "q": False}, "fgnn2_invariant")
        wl = _report({"p": False, "q": False}, "fwl2")
        with pytest.raises(PropertyViolation):
            assert_sound(gnn, wl, "fwl2")

    def test_inclusion_lists_offenders(self):
        a = _report({"p": True, "q": True, "r": False}, "a")
        b = _report({"p": True, "q": False, "r": True}, "b")
        assert check_inclusion(a, b) == ["q"]

    def test_different_corpora(self):
        a = _report({"p": True}, "a")
        b = _report({"q": True}, "b")
        with pytest.raises(InputError):
            check_inclusion(a, b)

    def test_completeness_rate(self):
        gnn = _report({"p": True, "q": False, "r": False}, "g")
        wl = _report({"p": True, "q": True, "r": False}, "fwl2")
        assert completeness_rate(gnn, wl, "fwl2") == 0.5
