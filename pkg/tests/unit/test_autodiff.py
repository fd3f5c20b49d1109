"""Tests for the tape, primitives, Adam and checkpoints."""

import json

import numpy as np
import pytest

from gnnlab.autodiff import ops
from gnnlab.autodiff.checkpoint import load_checkpoint, save_checkpoint
from gnnlab.autodiff.gradcheck import finite_diff_check
from gnnlab.autodiff.optim import AdamState, adam_step
from gnnlab.autodiff.tensor import Tape, Tensor, backward, parameter
from gnnlab.errors import InputError


class TestTape:
    def test_constants_are_not_recorded(self):
        with Tape() as tape:
            out = ops.add(Tensor(np.ones(3)), Tensor(np.ones(3)))
        assert len(tape) == 0
        assert not out.requires_grad

    def test_simple_gradient(self):
        x = parameter(np.array([1.0, -2.0, 3.0]), name="x")
        with Tape() as tape:
            loss = ops.reduce_sum(ops.mul(x, x))
        grads = backward(tape, loss, {"x": x})
        assert np.allclose(grads["x"], [2.0, -4.0, 6.0])

    def test_fan_out_accumulates(self):
        x = parameter(np.array(2.0))
        with Tape() as tape:
            y = ops.add(ops.mul(x, x), ops.scale(x, 3.0))
        assert backward(tape, y, {"x": x})["x"] == pytest.approx(7.0)

    def test_unused_parameter_gets_zero(self):
        x, w = parameter(np.ones(2)), parameter(np.ones((2, 2)))
        with Tape() as tape:
            loss = ops.reduce_sum(x)
        assert np.array_equal(backward(tape, loss, {"x": x, "w": w})["w"], np.zeros((2, 2)))

    def test_non_scalar_loss(self):
        x = parameter(np.ones(2))
        with Tape() as tape:
            y = ops.scale(x, 2.0)
        with pytest.raises(InputError):
            backward(tape, y, {"x": x})

    def test_loss_from_another_tape(self):
        x = parameter(np.ones(2))
        with Tape():
            loss = ops.reduce_sum(x)
        with pytest.raises(InputError):
            backward(Tape(), loss, {"y": parameter(np.ones(2))})


class TestPrimitives:
    def test_shape_mismatch(self):
        with pytest.raises(InputError):
            ops.add(Tensor(np.ones(2)), Tensor(np.ones(3)))

    def test_masked_softmax(self):
        x = Tensor(np.array([[1.0, 2.0, 3.0]]))
        p = ops.row_softmax(x, np.array([[True, False, True]])).numpy()
        assert p[0, 1] == 0.0
        assert p.sum() == pytest.approx(1.0)

    def test_fully_masked_row(self):
        with pytest.raises(InputError):
            ops.row_softmax(Tensor(np.ones((1, 2))), np.zeros((1, 2), dtype=bool))

    def test_log_softmax_stable(self):
        x = Tensor(np.array([[1000.0, 0.0]]))
        out = ops.row_log_softmax(x).numpy()
        assert np.isfinite(out).all()
        assert out[0, 0] == pytest.approx(0.0)

    def test_concat_last_axis_only(self):
        with pytest.raises(InputError):
            ops.concat([Tensor(np.ones((2, 2))), Tensor(np.ones((2, 2)))], axis=0)

    @pytest.mark.parametrize(
        "op",
        [
            lambda t: ops.reduce_sum(ops.relu(ops.matmul(t, ops.transpose(t)))),
            lambda t: ops.reduce_sum(ops.row_log_softmax(t)),
            lambda t: ops.reduce_sum(ops.mul(ops.row_softmax(t), t)),
            lambda t: ops.reduce_sum(ops.mul(ops.expand(t, 1, 4), ops.expand(t, 1, 4))),
        ],
    )
    def test_matches_finite_differences(self, op):
        x = Tensor(np.random.default_rng(0).normal(size=(2, 3)) + 0.05)
        assert finite_diff_check(op, x) < 1e-6

    def test_gradcheck_detects_wrong_gradient(self):
        def bad(t):
            # forward doubles but the recorded backward does not
            return ops.reduce_sum(ops.linear_map(t, lambda a: 2 * a, lambda g: g))

        assert finite_diff_check(bad, Tensor(np.ones(3))) > 0.1

    def test_quadratic_form_at_small_step(self):
        A = Tensor(np.random.default_rng(2).normal(size=(4, 4)))

        def quadratic(t):
            return ops.reduce_sum(ops.mul(t, ops.matmul(A, t)))

        x = Tensor(np.random.default_rng(3).normal(size=(4, 1)))
        assert finite_diff_check(quadratic, x, eps=1e-5) < 1e-7

    def test_single_stencil_at_eps(self):
        # the +-1e-4 stencil straddles the kink at 0: fd slope 0.75, reverse mode 1
        err = finite_diff_check(lambda t: ops.reduce_sum(ops.relu(t)), Tensor(np.array([5e-5])))
        assert err == pytest.approx(0.25)

    def test_relu_patterns_recorded_inside_block_only(self):
        x = Tensor(np.array([-1.0, 2.0]))
        with ops.recording_relu_patterns() as outer:
            ops.relu(x)
            with ops.recording_relu_patterns() as inner:
                ops.relu(ops.scale(x, -1.0))
        ops.relu(x)
        assert [p.tolist() for p in outer] == [[False, True], [True, False]]
        assert [p.tolist() for p in inner] == [[True, False]]


class TestAdam:
    def test_first_step_moves_by_lr(self):
        p = {"w": parameter(np.array([1.0, -1.0]))}
        g = {"w": np.array([0.5, -0.5])}
        new, state = adam_step(p, g, AdamState(lr=0.1))
        assert np.allclose(new["w"].data, [0.9, -0.9], atol=1e-6)
        assert state.t == 1

    def test_state_is_not_mutated(self):
        state = AdamState(lr=0.1)
        adam_step({"w": parameter(np.ones(1))}, {"w": np.ones(1)}, state)
        assert state.t == 0
        assert state.m == {}

    def test_zero_gradient_leaves_parameters(self):
        values = np.array([[0.3, -1.2], [2.0, 0.0]])
        new, state = adam_step({"w": parameter(values)}, {"w": np.zeros((2, 2))}, AdamState())
        assert np.array_equal(new["w"].data, values)
        assert state.t == 1
        assert np.array_equal(state.m["w"], np.zeros((2, 2)))

    def test_same_inputs_same_trajectory(self):
        def run():
            params = {"w": parameter(np.array([3.0, -2.0, 0.5]))}
            state = AdamState(lr=0.01)
            for _ in range(25):
                with Tape() as tape:
                    loss = ops.reduce_sum(ops.mul(params["w"], ops.scale(params["w"], 1.5)))
                params, state = adam_step(params, backward(tape, loss, params), state)
            return params["w"].data, state

        (w_a, state_a), (w_b, state_b) = run(), run()
        assert np.array_equal(w_a, w_b)
        assert state_a.t == state_b.t == 25
        assert np.array_equal(state_a.v["w"], state_b.v["w"])

    def test_minimizes_quadratic(self):
        params = {"w": parameter(np.array([3.0, -2.0]))}
        state = AdamState(lr=0.05)
        for _ in range(400):
            with Tape() as tape:
                loss = ops.reduce_sum(ops.mul(params["w"], params["w"]))
            params, state = adam_step(params, backward(tape, loss, params), state)
        assert np.abs(params["w"].data).max() < 0.2

    def test_gradient_shape_mismatch(self):
        with pytest.raises(InputError):
            adam_step({"w": parameter(np.ones(2))}, {"w": np.ones(3)}, AdamState())


class TestCheckpoint:
    def test_bit_exact_reload(self, tmp_path):
        values = np.random.default_rng(1).normal(size=(3, 4)) * 1e-7
        params = {"a.W0": parameter(values), "lambda": parameter(np.array(0.1))}
        path = save_checkpoint(tmp_path / "ck.json", params, {"family": "mgnn"}, {"epoch": 3})
        loaded, spec, meta = load_checkpoint(path)
        assert np.array_equal(loaded["a.W0"].data, values)
        assert loaded["lambda"].shape == ()
        assert spec == {"family": "mgnn"}
        assert meta == {"epoch": 3}

    def test_rejects_foreign_file(self, tmp_path):
        path = tmp_path / "other.json"
        path.write_text(json.dumps({"format": "something", "version": 1}))
        with pytest.raises(InputError):
            load_checkpoint(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(InputError):
            load_checkpoint(tmp_path / "missing.json")
