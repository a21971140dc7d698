import numpy as np
import pytest

from vsop_rl.envs.build_env import make_env
from vsop_rl.envs.constants import TABULAR_TRUNCATION_STEPS
from vsop_rl.envs.tabular_env import TabularEnv
from vsop_rl.exceptions import EpisodeFinishedError, InvalidActionError
from vsop_rl.tabular.mdp import TabularMdp, random_mdp


def _deterministic_chain() -> TabularMdp:
    """ Action 0 stays, action 1 moves right, last state absorbing """

    P = np.zeros((3, 2, 3))
    P[:, 0, :] = np.eye(3)
    P[0, 1, 1] = P[1, 1, 2] = P[2, 1, 2] = 1.0
    R = np.array([[0.0, 1.0], [0.0, 2.0], [0.0, 0.0]])

    return TabularMdp(P, R, 0.9, horizon=2, initial=np.array([1.0, 0.0, 0.0]))


#-------------------------------------------------------------------------

def test_one_hot_and_horizon(rng: np.random.Generator) -> None:
    env = TabularEnv(_deterministic_chain())
    obs = env.reset(rng)

    assert np.array_equal(obs, [1.0, 0.0, 0.0])

    first = env.step(1)
    assert np.array_equal(first.observation, [0.0, 1.0, 0.0])
    assert first.reward == 1.0 and not first.done

    second = env.step(1)
    assert np.array_equal(second.observation, [0.0, 0.0, 1.0])
    assert second.reward == 2.0 and second.terminated

    with pytest.raises(EpisodeFinishedError):
        env.step(0)


def test_infinite_horizon_truncates(rng: np.random.Generator) -> None:
    env = TabularEnv(_deterministic_chain().with_horizon(None))
    env.reset(rng)
    assert env.spec.max_episode_steps == TABULAR_TRUNCATION_STEPS

    for t in range(TABULAR_TRUNCATION_STEPS):
        result = env.step(0)
        assert not result.terminated

    assert result.truncated


def test_invalid_action(rng: np.random.Generator) -> None:
    env = TabularEnv(random_mdp(rng, 3, 2))
    env.reset(rng)

    with pytest.raises(InvalidActionError):
        env.step(2)


def test_make_env_from_file(tmp_path, rng: np.random.Generator) -> None:
    mdp = random_mdp(rng, 4, 3, horizon=5)
    path = tmp_path / "mdp.yml"
    mdp.save(path)

    env = make_env(f"Tabular:{path}")

    assert env.spec.obs_dim == 4 and env.spec.action_space.n == 3
    assert env.spec.max_episode_steps == 5
    assert np.allclose(env.model.P, mdp.P)
    assert env.spec.id == f"Tabular:{path}"
