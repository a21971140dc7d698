from dataclasses import replace

import numpy as np
import pytest

from vsop_rl.algos.build_agent import build_agent
from vsop_rl.algos.evaluation import evaluate
from vsop_rl.config import TrainConfig
from vsop_rl.envs import constants as c
from vsop_rl.envs.build_env import make_env

# Per-step cost is at most pi^2 + 0.1 * max_speed^2 + 0.001 * max_torque^2
PENDULUM_WORST_RETURN = -c.PENDULUM_MAX_STEPS * (
    np.pi ** 2 + 0.1 * c.PENDULUM_MAX_SPEED ** 2 + 0.001 * c.PENDULUM_MAX_TORQUE ** 2
)


class UniformAgent:

    """ Ignores observations and picks CartPole actions uniformly """

    def __init__(self, rng: np.random.Generator):
        self.rng = rng

    def mode_action(self, obs: np.ndarray) -> int:
        return int(self.rng.integers(2))


def _agent(env_id: str, seed: int):
    env = make_env(env_id)
    config = replace(TrainConfig(), env_id=env_id, seed=seed).validate()

    return build_agent(config, env.spec, np.random.default_rng(seed)), env


#-------------------------------------------------------------------------

def test_random_policy_band() -> None:
    result = evaluate(UniformAgent(np.random.default_rng(0)), make_env("CartPole-v1"), 100, np.random.default_rng(1))

    assert 8.0 <= result.mean <= 50.0
    assert len(result.returns) == 100


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_untrained_constant_policy_band(seed: int) -> None:
    """ Equal logits make the mode action constant, so the pole falls
        in roughly ten steps whatever the initial state """

    agent, env = _agent("CartPole-v1", seed)
    agent.actor.layers[-1].weight[...] = 0.0
    agent.actor.layers[-1].bias[...] = 0.0

    result = evaluate(agent, env, 10, np.random.default_rng(seed))

    assert 8.0 <= result.mean <= 50.0
    assert all(r < 50.0 for r in result.returns)


def test_same_seed_same_returns() -> None:
    agent, env = _agent("CartPole-v1", 4)

    first = evaluate(agent, env, 5, np.random.default_rng(11))
    second = evaluate(agent, env, 5, np.random.default_rng(11))

    assert first.returns == second.returns
    assert first.mean == second.mean and first.std == second.std


@pytest.mark.parametrize("seed", [0, 1])
def test_pendulum_returns_bounded(seed: int) -> None:
    agent, env = _agent("Pendulum-v1", seed)
    result = evaluate(agent, env, 3, np.random.default_rng(seed))

    for total in result.returns:
        assert PENDULUM_WORST_RETURN <= total <= 0.0


def test_needs_an_episode() -> None:
    agent, env = _agent("CartPole-v1", 0)

    with pytest.raises(ValueError):
        evaluate(agent, env, 0, np.random.default_rng(0))
