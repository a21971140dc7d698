from dataclasses import dataclass
from typing import Callable

import numpy as np

from vsop_rl.envs.base_env import BaseEnv


@dataclass
class EvalResult:
    mean: float
    std: float
    returns: list[float]


def evaluate(
    agent,
    env: BaseEnv,
    episodes: int,
    rng: np.random.Generator,
    obs_transform: Callable[[np.ndarray], np.ndarray] | None = None
) -> EvalResult:

    """ Full episodes with the mean-parameter policy acting at its
        mode. obs_transform must not update normalisation stats. """

    if episodes < 1:
        raise ValueError(f"Need at least one evaluation episode, got {episodes}")

    returns = []

    for _ in range(episodes):
        raw_obs = env.reset(rng)
        total, done = 0.0, False

        while not done:
            obs = raw_obs if obs_transform is None else obs_transform(raw_obs[None])[0]
            action = agent.mode_action(obs)
            result = env.step(action)
            total += result.reward
            done = result.done
            raw_obs = result.observation

        returns.append(total)

    return EvalResult(float(np.mean(returns)), float(np.std(returns)), returns)
