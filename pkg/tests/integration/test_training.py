"""Training runs: quick determinism checks and the desk-scale acceptance runs (marked slow)."""

import numpy as np
import pytest

from gnnlab.models import CorpusSpec, GraphKind, ModelFamily, ModelSpec, TrainConfig, Variant
from gnnlab.qap.dataset import make_split
from gnnlab.qap.evaluation import evaluate
from gnnlab.qap.matching import degree_profile_baseline, node_accuracy
from gnnlab.qap.training import train
from gnnlab.separation.corpus import build_corpus
from gnnlab.separation.report import (
    completeness_rate,
    default_template,
    gnn_separation_report,
    soundness_violations,
    wl_separation_report,
)

TINY_MODEL = ModelSpec(
    family=ModelFamily.FGNN2,
    variant=Variant.EQUIVARIANT,
    layer_widths=[8, 8],
    mlp_hidden=8,
    mlp_depth=2,
    out_width=8,
)


def _tiny(**kwargs) -> TrainConfig:
    base = dict(n_min=6, n_max=8, n_train=12, n_val=4, n_test=4, epochs=3, batch_size=4)
    return TrainConfig(model=TINY_MODEL, **{**base, **kwargs})


class TestTrainingLoop:
    def test_deterministic(self, tmp_path):
        a = train(_tiny(), tmp_path / "a")
        b = train(_tiny(), tmp_path / "b")
        assert a.metrics.read_bytes() == b.metrics.read_bytes()
        assert a.checkpoint.read_bytes() == b.checkpoint.read_bytes()

    def test_loss_goes_down(self, tmp_path):
        result = train(_tiny(epochs=6, lr=1e-2), tmp_path)
        train_losses = [row["loss"] for row in result.history if row["split"] == "train"]
        assert train_losses[-1] < train_losses[0]

    def test_checkpoint_meta(self, tmp_path):
        from gnnlab.qap.evaluation import load_matcher

        result = train(_tiny(train_noise=0.03), tmp_path)
        spec, params, meta = load_matcher(result.checkpoint)
        assert spec == TINY_MODEL
        assert meta["train_noise"] == 0.03
        assert meta["epoch"] == result.best_epoch

    def test_mixed_sizes_and_regular_graphs(self, tmp_path):
        config = _tiny(graph_kind=GraphKind.REGULAR, n_min=8, n_max=10, degree=4, epochs=1)
        result = train(config, tmp_path)
        assert 0.0 <= result.best_val_accuracy <= 1.0


@pytest.mark.slow
class TestSeparationAcceptance:
    def test_default_corpus_soundness_and_completeness(self):
        corpus = build_corpus(CorpusSpec())
        wl = wl_separation_report(corpus, ["vertex", "fwl2"])
        assert wl.verdicts("vertex")["c6_vs_2c3"] is False
        assert wl.verdicts("fwl2")["c6_vs_2c3"] is True
        assert wl.verdicts("fwl2")["rook_vs_shrikhande"] is False

        mgnn = gnn_separation_report(corpus, default_template("mgnn"), seeds=10, seed=0)
        assert soundness_violations(mgnn, wl, "vertex") == []
        fgnn = gnn_separation_report(corpus, default_template("fgnn2"), seeds=10, seed=0)
        assert soundness_violations(fgnn, wl, "fwl2") == []
        assert completeness_rate(fgnn, wl, "fwl2") >= 0.95


@pytest.mark.slow
class TestMatchingAcceptance:
    def test_desk_scale_accuracy(self, tmp_path):
        config = TrainConfig(seed=0)
        result = train(config, tmp_path)
        data = {
            level: make_split(config, "test", level, config.n_test)
            for level in config.eval_noise_levels
        }
        frame = evaluate(result.checkpoint, data, ["lap", "argmax"])
        lap = frame[frame["decoder"] == "lap"].sort_values("noise")
        argmax = frame[frame["decoder"] == "argmax"].sort_values("noise")
        assert lap["mean_acc"].iloc[0] >= 0.90
        assert lap["mean_acc"].mean() >= argmax["mean_acc"].mean()

        acc, err = lap["mean_acc"].to_numpy(), lap["stderr"].to_numpy()
        inversions = [i for i in range(len(acc) - 1) if acc[i + 1] > acc[i]]
        assert len(inversions) <= 1
        for i in inversions:
            assert acc[i + 1] - acc[i] <= 2 * max(err[i], err[i + 1])

    def test_regular_graphs_defeat_the_baseline(self, tmp_path):
        config = TrainConfig(graph_kind=GraphKind.REGULAR, n_min=16, n_max=16, degree=6, seed=0)
        result = train(config, tmp_path)
        test = make_split(config, "test", 0.0, config.n_test)
        baseline = np.mean([node_accuracy(degree_profile_baseline(i), i.truth) for i in test])
        assert baseline <= 0.2
        frame = evaluate(result.checkpoint, {0.0: test}, "lap")
        assert frame["mean_acc"].iloc[0] >= 0.6
