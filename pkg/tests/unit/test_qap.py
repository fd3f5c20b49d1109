"""Tests for the alignment dataset, decoders, siamese scoring, loss and evaluation."""

import itertools
import math

import numpy as np
import pytest

from gnnlab.autodiff.checkpoint import save_checkpoint
from gnnlab.autodiff.tensor import Tape, Tensor, backward
from gnnlab.errors import InputError
from gnnlab.gnn.model import init_params
from gnnlab.graph.generators import gen_erdos_renyi, make_rng
from gnnlab.graph.tensor import Permutation, permute
from gnnlab.models import GraphKind, ModelFamily, ModelSpec, TrainConfig, Variant
from gnnlab.qap.dataset import MatchInstance, make_dataset, make_split
from gnnlab.qap.evaluation import EVAL_COLUMNS, cross_noise_sweep, evaluate, score_instances
from gnnlab.qap.matching import (
    assignment_objective,
    degree_profile_baseline,
    hungarian_lap,
    node_accuracy,
    row_argmax,
)
from gnnlab.qap.siamese import matching_loss, siamese_batch, siamese_forward

SPEC = ModelSpec(
    family=ModelFamily.FGNN2,
    variant=Variant.EQUIVARIANT,
    layer_widths=[4, 4],
    mlp_hidden=6,
    mlp_depth=2,
    out_width=4,
)
SMALL = TrainConfig(n_min=6, n_max=8, n_train=4, n_val=2, n_test=3, model=SPEC, seed=1)


def _instance(n: int, seed: int) -> MatchInstance:
    g = gen_erdos_renyi(n, 0.4, seed)
    sigma = Permutation.random(n, make_rng(seed + 1))
    return MatchInstance(g1=g, g2=permute(g, sigma), truth=sigma)


class TestHungarian:
    @pytest.mark.parametrize("seed", range(200))
    def test_matches_brute_force(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 8))
        S = rng.normal(size=(n, n))
        best = max(
            sum(S[i, p[i]] for i in range(n)) for p in itertools.permutations(range(n))
        )
        pi = hungarian_lap(S)
        assert sorted(pi.tolist()) == list(range(n))
        assert assignment_objective(S, pi) == pytest.approx(best)

    def test_identity_for_diagonal_scores(self):
        assert hungarian_lap(np.eye(5) * 3 + 1).tolist() == [0, 1, 2, 3, 4]

    def test_lowest_index_on_ties(self):
        assert hungarian_lap(np.zeros((3, 3))).tolist() == [0, 1, 2]

    def test_argmax_can_collide(self):
        S = np.array([[2.0, 1.0], [2.0, 0.0]])
        assert row_argmax(S).tolist() == [0, 0]
        assert hungarian_lap(S).tolist() in ([0, 1], [1, 0])

    def test_rejects_bad_input(self):
        with pytest.raises(InputError):
            hungarian_lap(np.ones((2, 3)))
        with pytest.raises(InputError):
            hungarian_lap(np.array([[np.nan]]))

    def test_node_accuracy(self):
        assert node_accuracy(np.array([0, 1, 3, 2]), np.array([0, 1, 2, 3])) == 0.5
        with pytest.raises(InputError):
            node_accuracy(np.array([0]), np.array([0, 1]))


class TestDataset:
    def test_reproducible(self):
        a = make_split(SMALL, "train", 0.02, 3)
        b = make_split(SMALL, "train", 0.02, 3)
        for x, y in zip(a, b):
            assert x.g1 == y.g1 and x.g2 == y.g2 and x.truth == y.truth

    def test_splits_differ(self):
        train = make_split(SMALL, "train", 0.0, 1)[0]
        val = make_split(SMALL, "val", 0.0, 1)[0]
        assert not (train.g1 == val.g1 and train.truth == val.truth)

    def test_noiseless_instance_is_exact_relabeling(self):
        for inst in make_split(SMALL, "test", 0.0, 3):
            assert permute(inst.g1, inst.truth) == inst.g2
            assert SMALL.n_min <= inst.n <= SMALL.n_max

    def test_identity_order(self):
        config = SMALL.model_copy(update={"identity_order": True})
        inst = make_split(config, "train", 0.0, 1)[0]
        assert inst.truth == Permutation.identity(inst.n)
        assert inst.g1 == inst.g2

    def test_regular_kind(self):
        config = TrainConfig(
            graph_kind=GraphKind.REGULAR, n_min=8, n_max=8, degree=3, model=SPEC, n_train=2
        )
        inst = make_split(config, "train", 0.0, 1)[0]
        assert inst.g1.degrees.tolist() == [3] * 8

    def test_dataset_levels(self):
        data = make_dataset(SMALL)
        assert len(data.train) == 4 and len(data.val) == 2
        assert sorted(data.test) == SMALL.eval_noise_levels
        assert all(len(v) == 3 for v in data.test.values())

    def test_invariant_model_rejected(self):
        with pytest.raises(ValueError):
            TrainConfig(model=SPEC.model_copy(update={"variant": Variant.INVARIANT}))

    def test_unknown_split(self):
        with pytest.raises(InputError):
            make_split(SMALL, "holdout", 0.0, 1)


class TestMatchingLoss:
    @pytest.mark.parametrize("n", [2, 5, 9])
    def test_uniform_scores_give_log_n(self, n):
        loss = matching_loss(Tensor(np.zeros((n, n))), Permutation.random(n, make_rng(n)))
        assert loss.item() == pytest.approx(math.log(n))

    def test_confident_correct_scores_give_small_loss(self):
        truth = Permutation(np.array([2, 0, 1]))
        S = np.full((3, 3), -20.0)
        S[np.arange(3), truth.map] = 20.0
        assert matching_loss(Tensor(S), truth).item() < 1e-12

    def test_padding_does_not_change_loss(self):
        rng = np.random.default_rng(0)
        S_small = rng.normal(size=(3, 3))
        truth = Permutation(np.array([1, 2, 0]))
        padded = np.full((1, 5, 5), 99.0)
        padded[0, :3, :3] = S_small
        mask = np.array([[True, True, True, False, False]])
        plain = matching_loss(Tensor(S_small), truth).item()
        masked = matching_loss(Tensor(padded), [truth], mask).item()
        assert masked == pytest.approx(plain)

    def test_batch_weights_rows(self):
        instances = [_instance(6, 1), _instance(4, 2)]
        params = init_params(SPEC, 0)
        S, mask = siamese_batch(SPEC, params, instances)
        batch_loss = matching_loss(S, [i.truth for i in instances], mask).item()
        singles = [
            matching_loss(siamese_forward(SPEC, params, i), i.truth).item() for i in instances
        ]
        assert batch_loss == pytest.approx((6 * singles[0] + 4 * singles[1]) / 10)

    def test_fully_masked_instance(self):
        with pytest.raises(InputError):
            matching_loss(
                Tensor(np.zeros((2, 3, 3))),
                [Permutation.identity(3), Permutation.identity(0)],
                np.array([[True] * 3, [False] * 3]),
            )

    def test_truth_length_mismatch(self):
        with pytest.raises(InputError):
            matching_loss(Tensor(np.zeros((3, 3))), Permutation.identity(2))

    def test_gradients_reach_parameters(self):
        params = init_params(SPEC, 0)
        inst = _instance(5, 3)
        with Tape() as tape:
            loss = matching_loss(siamese_forward(SPEC, params, inst), inst.truth)
        grads = backward(tape, loss, params)
        assert any(np.abs(g).sum() > 0 for g in grads.values())


class TestSiamese:
    def test_scores_shape(self):
        inst = _instance(5, 0)
        assert siamese_forward(SPEC, init_params(SPEC, 0), inst).shape == (5, 5)

    def test_invariant_model_rejected(self):
        spec = SPEC.model_copy(update={"variant": Variant.INVARIANT})
        with pytest.raises(InputError):
            siamese_forward(spec, init_params(spec, 0), _instance(4, 0))

    def test_relabeling_permutes_scores(self):
        params = init_params(SPEC, 1)
        inst = _instance(6, 4)
        S = siamese_forward(SPEC, params, inst).numpy()
        tau = Permutation.random(6, make_rng(9))
        moved = MatchInstance(g1=inst.g1, g2=permute(inst.g2, tau), truth=tau.compose(inst.truth))
        S_moved = siamese_forward(SPEC, params, moved).numpy()
        assert np.allclose(S_moved[:, tau.map], S)


class TestBaseline:
    def test_identical_graphs_give_identity(self):
        g = gen_erdos_renyi(9, 0.4, 5)
        inst = MatchInstance(g1=g, g2=g, truth=Permutation.identity(9))
        assert degree_profile_baseline(inst) == Permutation.identity(9)

    def test_returns_a_permutation(self):
        inst = _instance(8, 6)
        assert sorted(degree_profile_baseline(inst).tolist()) == list(range(8))


class TestEvaluation:
    def test_score_instances(self):
        instances = [_instance(5, s) for s in range(3)]
        loss, accs = score_instances(SPEC, init_params(SPEC, 0), instances, batch_size=2)
        assert np.isfinite(loss)
        assert len(accs) == 3
        assert all(0.0 <= a <= 1.0 for a in accs)

    def test_evaluate_frame(self):
        data = {0.0: make_split(SMALL, "test", 0.0, 3), 0.05: make_split(SMALL, "test", 0.05, 3)}
        frame = evaluate((SPEC, init_params(SPEC, 0)), data, ["lap", "argmax"], baseline=True)
        assert list(frame.columns) == EVAL_COLUMNS
        assert len(frame) == 6
        assert set(frame["decoder"]) == {"lap", "argmax", "degree_profile"}
        assert (frame["n_instances"] == 3).all()

    def test_unknown_decoder(self):
        with pytest.raises(InputError):
            evaluate((SPEC, init_params(SPEC, 0)), [_instance(4, 0)], "greedy")

    def test_sweep_rows_follow_training_noise(self, tmp_path):
        data = {0.0: make_split(SMALL, "test", 0.0, 2)}
        paths = []
        for noise in (0.05, 0.0):
            path = tmp_path / f"ck_{noise}.json"
            save_checkpoint(
                path, init_params(SPEC, 0), SPEC.model_dump(mode="json"), {"train_noise": noise}
            )
            paths.append(path)
        frame = cross_noise_sweep(paths, data)
        assert frame["train_noise"].tolist() == [0.0, 0.05]
        assert list(frame.columns) == ["checkpoint", "train_noise", "0"]


class TestMaskingConsistency:
    @pytest.mark.parametrize("seed", range(20))
    def test_batched_gradients_match_weighted_singles(self, seed):
        rng = make_rng(seed)
        sizes = [int(n) for n in rng.integers(3, 7, size=3)]
        instances = [_instance(n, int(rng.integers(2**31))) for n in sizes]
        params = init_params(SPEC, seed)

        with Tape() as tape:
            S, mask = siamese_batch(SPEC, params, instances)
            loss = matching_loss(S, [i.truth for i in instances], mask)
        batched = backward(tape, loss, params)

        total = {k: np.zeros_like(v.data) for k, v in params.items()}
        for inst in instances:
            with Tape() as tape:
                single = matching_loss(siamese_forward(SPEC, params, inst), inst.truth)
            for k, g in backward(tape, single, params).items():
                total[k] += g * inst.n / sum(sizes)
        for k in params:
            assert np.allclose(batched[k], total[k], rtol=1e-9, atol=1e-12)
