import numpy as np

from vsop_rl.exceptions import DimensionError, EmptyBufferError


class RolloutBuffer:

    """ On-policy storage over (num_steps, num_envs).
        bootstrap_obs/bootstrap_values hold the (normalised) final
        observation and its value at truncated steps and are NaN
        elsewhere. last_obs/last_values are the states following the
        final step, used to bootstrap unfinished episodes. """

    def __init__(self, num_steps: int, num_envs: int, obs_dim: int, action_shape: tuple[int, ...] = ()):
        if num_steps < 1 or num_envs < 1:
            raise DimensionError(f"Buffer needs positive dims, got ({num_steps}, {num_envs})")

        self.num_steps = num_steps
        self.num_envs = num_envs
        self.obs_dim = obs_dim
        self.action_shape = tuple(action_shape)
        self.discrete = len(self.action_shape) == 0
        self.version = -1
        self.clear()

    def clear(self) -> None:
        T, N, d = self.num_steps, self.num_envs, self.obs_dim

        self.obs = np.zeros((T, N, d))
        self.raw_obs = np.zeros((T, N, d))
        self.actions = np.zeros((T, N) + self.action_shape, dtype=np.int64 if self.discrete else np.float64)
        self.log_probs = np.zeros((T, N))
        self.rewards = np.zeros((T, N))
        self.raw_rewards = np.zeros((T, N))
        self.values = np.zeros((T, N))
        self.terminated = np.zeros((T, N), dtype=bool)
        self.truncated = np.zeros((T, N), dtype=bool)
        self.bootstrap_obs = np.full((T, N, d), np.nan)
        self.bootstrap_values = np.full((T, N), np.nan)
        self.last_obs = np.full((N, d), np.nan)
        self.last_values = np.full(N, np.nan)
        self.ptr = 0

    def __len__(self) -> int:
        return self.ptr * self.num_envs

    @property
    def size(self) -> int:
        return self.num_steps * self.num_envs

    @property
    def full(self) -> bool:
        return self.ptr == self.num_steps

    def add(
        self,
        obs: np.ndarray,
        raw_obs: np.ndarray,
        actions: np.ndarray,
        log_probs: np.ndarray,
        rewards: np.ndarray,
        raw_rewards: np.ndarray,
        values: np.ndarray,
        terminated: np.ndarray,
        truncated: np.ndarray
    ) -> int:

        if self.full:
            raise IndexError("Rollout buffer is full")

        t = self.ptr
        self.obs[t] = obs
        self.raw_obs[t] = raw_obs
        self.actions[t] = actions
        self.log_probs[t] = log_probs
        self.rewards[t] = rewards
        self.raw_rewards[t] = raw_rewards
        self.values[t] = values
        self.terminated[t] = terminated
        self.truncated[t] = truncated
        self.ptr += 1

        return t

    def set_bootstrap(self, t: int, env_idx: int, obs: np.ndarray, value: float) -> None:
        self.bootstrap_obs[t, env_idx] = obs
        self.bootstrap_values[t, env_idx] = value

    def set_last(self, obs: np.ndarray, values: np.ndarray) -> None:
        self.last_obs[:] = obs
        self.last_values[:] = values

    def check_filled(self) -> None:
        if self.ptr == 0:
            raise EmptyBufferError("Rollout buffer is empty")
        if not self.full:
            raise EmptyBufferError(f"Rollout buffer holds {self.ptr} of {self.num_steps} steps")

    def flat(self, array: np.ndarray) -> np.ndarray:
        """ (T, N, ...) -> (T * N, ...) in step-major order """

        return array.reshape((self.size,) + array.shape[2:])

    def minibatch_indices(self, num_minibatches: int, rng: np.random.Generator) -> list[np.ndarray]:
        if self.size % num_minibatches != 0:
            raise DimensionError(f"{self.size} samples not divisible into {num_minibatches} minibatches")

        perm = rng.permutation(self.size)

        return np.split(perm, num_minibatches)
