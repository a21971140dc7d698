from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from vsop_rl.envs.base_env import BaseEnv, EnvSpec


#-------------------------------------------------------------------------

@dataclass
class VecStepResult:

    """ Batched transition. observation holds the post-reset observation
        for rows that finished; the true final observation of those
        rows is in final_observation. """

    observation: np.ndarray
    reward: np.ndarray
    terminated: np.ndarray
    truncated: np.ndarray
    final_observation: np.ndarray
    episodes: list[tuple[int, float, int]] = field(default_factory=list)

    @property
    def done(self) -> np.ndarray:
        return self.terminated | self.truncated


def sub_generators(seed: int, n: int) -> list[np.random.Generator]:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n)]


class SyncVectorEnv:

    """ n independent instances stepped in index order, auto-reset """

    def __init__(self, env_fns: list[Callable[[], BaseEnv]], seed: int):
        if len(env_fns) < 1:
            raise ValueError("Vector env needs at least one instance")

        self.envs = [fn() for fn in env_fns]
        self.rngs = sub_generators(seed, len(self.envs))
        self._returns = np.zeros(len(self.envs))
        self._lengths = np.zeros(len(self.envs), dtype=np.int64)

    @property
    def num_envs(self) -> int:
        return len(self.envs)

    @property
    def spec(self) -> EnvSpec:
        return self.envs[0].spec

    def reset(self) -> np.ndarray:
        self._returns[:] = 0.0
        self._lengths[:] = 0

        return np.stack([env.reset(rng) for env, rng in zip(self.envs, self.rngs)])

    def step(self, actions: np.ndarray) -> VecStepResult:
        obs, final_obs = [], []
        rewards = np.zeros(self.num_envs)
        terminated = np.zeros(self.num_envs, dtype=bool)
        truncated = np.zeros(self.num_envs, dtype=bool)
        episodes = []

        for i, env in enumerate(self.envs):
            result = env.step(actions[i])
            rewards[i] = result.reward
            terminated[i] = result.terminated
            truncated[i] = result.truncated
            final_obs.append(result.observation)

            self._returns[i] += result.reward
            self._lengths[i] += 1

            if result.done:
                episodes.append((i, float(self._returns[i]), int(self._lengths[i])))
                self._returns[i] = 0.0
                self._lengths[i] = 0
                obs.append(env.reset(self.rngs[i]))
            else:
                obs.append(result.observation)

        return VecStepResult(
            np.stack(obs), rewards, terminated, truncated, np.stack(final_obs), episodes
        )
