from dataclasses import dataclass

import numpy as np

from vsop_rl.exceptions import MissingBootstrapError
from vsop_rl.rollout.buffer import RolloutBuffer


#-------------------------------------------------------------------------

@dataclass
class AdvantageSet:

    """ advantages h and return targets g = h + v, both (T, N) """

    advantages: np.ndarray
    returns: np.ndarray
    values: np.ndarray


def gae_recursion(
    rewards: np.ndarray,
    values: np.ndarray,
    next_values: np.ndarray,
    episode_end: np.ndarray,
    gamma: float,
    lam: float
) -> np.ndarray:

    """ h_t = delta_t + gamma * lambda * (1 - end_t) * h_{t+1},
        delta_t = r_t + gamma * v'_t - v_t, over axis 0 """

    advantages = np.zeros_like(rewards)
    last = np.zeros_like(rewards[0])

    for t in reversed(range(rewards.shape[0])):
        delta = rewards[t] + gamma * next_values[t] - values[t]
        last = delta + gamma * lam * (1.0 - episode_end[t]) * last
        advantages[t] = last

    return advantages


def compute_gae(
    buffer: RolloutBuffer,
    gamma: float,
    lam: float,
    values: np.ndarray | None = None,
    last_values: np.ndarray | None = None,
    bootstrap_values: np.ndarray | None = None
) -> AdvantageSet:

    """ GAE over a filled buffer. Terminated steps bootstrap from 0,
        truncated steps from the recorded value of the final
        observation. Value arrays default to those stored at
        collection and may be replaced by a recomputed critic. """

    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must be in [0, 1], got {gamma}")
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must be in [0, 1], got {lam}")

    buffer.check_filled()

    values = buffer.values if values is None else values
    last_values = buffer.last_values if last_values is None else last_values
    bootstrap_values = buffer.bootstrap_values if bootstrap_values is None else bootstrap_values

    needs_bootstrap = buffer.truncated & ~buffer.terminated

    if np.any(np.isnan(bootstrap_values[needs_bootstrap])):
        raise MissingBootstrapError("Truncated step without a bootstrap value")
    if np.any(np.isnan(last_values)):
        raise MissingBootstrapError("Final observation values missing")

    next_values = np.concatenate([values[1:], last_values[None]], axis=0)
    next_values = np.where(needs_bootstrap, bootstrap_values, next_values)
    next_values = np.where(buffer.terminated, 0.0, next_values)
    episode_end = (buffer.terminated | buffer.truncated).astype(np.float64)

    advantages = gae_recursion(buffer.rewards, values, next_values, episode_end, gamma, lam)

    return AdvantageSet(advantages, advantages + values, values)


#-------------------------------------------------------------------------

def explained_variance(predicted: np.ndarray, target: np.ndarray) -> float:
    var_target = np.var(target)

    if var_target == 0.0:
        return float("nan")

    return float(1.0 - np.var(target - predicted) / var_target)
