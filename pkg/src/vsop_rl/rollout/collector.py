import numpy as np

from vsop_rl.envs.vector_env import SyncVectorEnv
from vsop_rl.rollout.buffer import RolloutBuffer
from vsop_rl.rollout.normalisation import NORM_EPS, RewardScaler, RunningMoments, normalize_obs


class RolloutCollector:

    """ Steps a vector env under an agent and fills rollout buffers.
        Observations are normalised when acted on (statistics move
        then); rewards are scaled at collection, before GAE. """

    def __init__(self, envs: SyncVectorEnv, gamma: float, norm_obs: bool = True, norm_reward: bool = True):
        self.envs = envs
        self.obs_moments = RunningMoments((envs.spec.obs_dim,)) if norm_obs else None
        self.reward_scaler = RewardScaler(envs.num_envs, gamma, norm_reward)
        self.global_step = 0
        self.episodes: list[tuple[int, int, float, int]] = []
        self._raw_obs = envs.reset()

    def normalise(self, raw_obs: np.ndarray, update: bool = False) -> np.ndarray:
        if self.obs_moments is None:
            return np.asarray(raw_obs, dtype=np.float64)

        return normalize_obs(self.obs_moments, raw_obs, update)

    def scale_reward(self, reward: np.ndarray) -> np.ndarray:
        """ Frozen reward scaling (no accumulator update) """

        if not self.reward_scaler.enabled:
            return reward

        moments = self.reward_scaler.moments
        scaled = reward / np.sqrt(moments.var + NORM_EPS)

        return np.clip(scaled, -moments.clip, moments.clip)

    def collect(self, agent, buffer: RolloutBuffer, thompson: bool = False) -> list[tuple[int, int, float, int]]:
        """ Fill the buffer with num_steps transitions per env.
            Returns (global step, env index, return, length) for every
            episode that finished during collection. """

        buffer.clear()
        buffer.version = agent.version
        finished = []

        for _ in range(buffer.num_steps):
            raw_obs = self._raw_obs
            obs = self.normalise(raw_obs, update=True)
            actions, log_probs, values = agent.act(obs, thompson)

            result = self.envs.step(actions)
            self.global_step += self.envs.num_envs
            rewards = self.reward_scaler(result.reward, result.done)

            t = buffer.add(
                obs, raw_obs, actions, log_probs, rewards, result.reward,
                values, result.terminated, result.truncated
            )

            for i in np.flatnonzero(result.truncated & ~result.terminated):
                final_obs = self.normalise(result.final_observation[i][None])
                buffer.set_bootstrap(t, i, final_obs[0], float(agent.value(final_obs)[0]))

            for i, ret, length in result.episodes:
                finished.append((self.global_step, i, ret, length))

            self._raw_obs = result.observation

        last_obs = self.normalise(self._raw_obs)
        buffer.set_last(last_obs, agent.value(last_obs))
        self.episodes.extend(finished)

        return finished
