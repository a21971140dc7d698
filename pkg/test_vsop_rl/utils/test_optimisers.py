import numpy as np
import pytest

from vsop_rl.exceptions import DimensionError, NonFiniteGradientError
from vsop_rl.utils.optimisers import (
    LrSchedule,
    OptimizerState,
    beta_from_dropout,
    clip_by_global_norm,
    global_norm,
    step
)


#-------------------------------------------------------------------------

def test_adam_first_step() -> None:
    state = OptimizerState("adam", eps=1e-8)
    params = {"w": np.array([1.0, -2.0, 0.5])}
    grads = {"w": np.array([0.3, -4.0, 1e-3])}
    updated = step(state, params, grads, lr=0.1)

    # Bias-corrected moments equal g and g^2 after one step
    expected = params["w"] - 0.1 * grads["w"] / (np.abs(grads["w"]) + 1e-8)
    assert np.allclose(updated["w"], expected, rtol=0, atol=1e-12)
    assert state.step_count == 1


def test_rmsprop_first_step() -> None:
    state = OptimizerState("rmsprop", eps=3e-6, alpha=0.99)
    params = {"w": np.array([1.0, -2.0])}
    grads = {"w": np.array([0.5, -1.0])}
    updated = step(state, params, grads, lr=0.01)

    expected = params["w"] - 0.01 * grads["w"] / (np.sqrt(0.01) * np.abs(grads["w"]) + 3e-6)
    assert np.allclose(updated["w"], expected, rtol=0, atol=1e-12)


def test_weight_decay_and_exclusion() -> None:
    state = OptimizerState("adam")
    params = {"w": np.array([2.0]), "log_std": np.array([1.0])}
    grads = {"w": np.zeros(1), "log_std": np.zeros(1)}
    updated = step(state, params, grads, lr=0.1, decay_coeff=0.5, no_decay=("log_std",))

    assert np.isclose(updated["w"][0], 2.0 - 0.1 * 2.0 * 0.5 * 2.0)
    assert updated["log_std"][0] == 1.0


def test_step_errors() -> None:
    params = {"w": np.zeros(2), "b": np.zeros(1)}

    with pytest.raises(NonFiniteGradientError, match="b"):
        step(OptimizerState(), params, {"w": np.zeros(2), "b": np.array([np.nan])}, 0.1)

    with pytest.raises(DimensionError):
        step(OptimizerState(), params, {"w": np.zeros(3), "b": np.zeros(1)}, 0.1)

    with pytest.raises(DimensionError):
        step(OptimizerState(), params, {"w": np.zeros(2)}, 0.1)

    with pytest.raises(ValueError):
        OptimizerState("sgd")


#-------------------------------------------------------------------------

def test_lr_schedule() -> None:
    schedule = LrSchedule(1e-3, 4)

    assert [schedule(t) for t in range(4)] == pytest.approx([1e-3, 7.5e-4, 5e-4, 2.5e-4])
    assert LrSchedule(1e-3, 4, anneal=False)(3) == 1e-3


def test_beta_from_dropout() -> None:
    assert beta_from_dropout(0.02, 1024) == pytest.approx(0.98 / 2048)

    with pytest.raises(ValueError):
        beta_from_dropout(1.0, 10)


def test_clip_by_global_norm() -> None:
    grads = {"a": np.array([3.0]), "b": np.array([4.0])}
    clipped, norm = clip_by_global_norm(grads, 1.0)

    assert norm == pytest.approx(5.0)
    assert global_norm(clipped) == pytest.approx(1.0, abs=1e-6)

    unclipped, _ = clip_by_global_norm(grads, np.inf)
    assert unclipped is grads
