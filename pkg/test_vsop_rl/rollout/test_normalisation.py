import numpy as np
import pytest

from vsop_rl.rollout.normalisation import NORM_EPS, RewardScaler, RunningMoments, normalize_obs


#-------------------------------------------------------------------------

def test_running_moments_match_numpy(rng: np.random.Generator) -> None:
    moments = RunningMoments((3,))
    batches = [rng.normal(2.0, 3.0, size=(n, 3)) for n in (1, 7, 50, 2)]

    for batch in batches:
        moments.update(batch)

    data = np.concatenate(batches)
    assert moments.count == 60
    assert np.allclose(moments.mean, data.mean(axis=0))
    assert np.allclose(moments.var, data.var(axis=0))


def test_normalize_obs_update_flag(rng: np.random.Generator) -> None:
    moments = RunningMoments((2,))
    assert np.array_equal(moments.var, np.zeros(2))

    x = rng.normal(5.0, 2.0, size=(10, 2))
    normed = normalize_obs(moments, x)
    assert np.allclose(normed, np.clip((x - x.mean(0)) / np.sqrt(x.var(0) + NORM_EPS), -10, 10))

    frozen = normalize_obs(moments, x + 100.0, update=False)
    assert moments.count == 10
    assert np.all(frozen == 10.0)


def test_reward_scaler_recurrence(rng: np.random.Generator) -> None:
    scaler = RewardScaler(2, gamma=0.9)
    returns = np.zeros(2)
    history = []

    for t in range(20):
        reward = rng.uniform(0.0, 3.0, size=2)
        done = np.array([t % 7 == 6, False])
        returns = returns * 0.9 * (1.0 - done) + reward
        history.append(returns.copy())
        expected = np.clip(reward / np.sqrt(np.var(history) + NORM_EPS), -10.0, 10.0)

        assert np.allclose(scaler(reward, done), expected)

    assert np.allclose(scaler.returns, returns)


def test_reward_scaler_disabled() -> None:
    scaler = RewardScaler(1, gamma=0.99, enabled=False)
    reward = np.array([123.0])

    assert np.array_equal(scaler(reward, np.array([False])), reward)
    assert scaler.moments.count == 0


def test_state_dict_round_trip(rng: np.random.Generator) -> None:
    moments = RunningMoments((4,))
    moments.update(rng.standard_normal((9, 4)))

    restored = RunningMoments((4,))
    restored.load_state_dict(moments.state_dict())

    assert restored.count == 9
    assert np.array_equal(restored.mean, moments.mean)
    assert np.array_equal(restored.var, moments.var)
