import numpy as np
import pytest

from vsop_rl.envs.build_env import make_vec
from vsop_rl.envs.classic_control import CartPole
from vsop_rl.envs.vector_env import SyncVectorEnv


#-------------------------------------------------------------------------

def test_auto_reset_and_episodes() -> None:
    envs = make_vec("CartPole-v1", 3, seed=0)
    obs = envs.reset()
    assert obs.shape == (3, 4)

    finished = []
    for _ in range(300):
        result = envs.step(np.ones(3, dtype=np.int64))
        assert result.observation.shape == (3, 4)

        for i, ret, length in result.episodes:
            assert result.done[i]
            # Reset observations come from the reset bound, finals are outside the thresholds
            assert np.all(np.abs(result.observation[i]) <= 0.05)
            assert not np.array_equal(result.observation[i], result.final_observation[i])
            assert ret == float(length)
            finished.append(i)

        not_done = ~result.done
        assert np.array_equal(result.observation[not_done], result.final_observation[not_done])

    assert set(finished) == {0, 1, 2}


def test_seeding() -> None:
    a = make_vec("Acrobot-v1", 2, seed=11).reset()
    b = make_vec("Acrobot-v1", 2, seed=11).reset()
    c = make_vec("Acrobot-v1", 2, seed=12).reset()

    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a[0], a[1])


def test_errors() -> None:
    with pytest.raises(ValueError):
        SyncVectorEnv([], seed=0)

    with pytest.raises(ValueError):
        make_vec("CartPole-v1", 0, seed=0)

    assert SyncVectorEnv([CartPole], seed=0).spec.id == "CartPole-v1"
