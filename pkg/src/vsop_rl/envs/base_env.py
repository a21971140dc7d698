from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from vsop_rl.exceptions import EpisodeFinishedError, InvalidActionError


#-------------------------------------------------------------------------

@dataclass(frozen=True)
class ActionSpace:

    """ Either discrete (n set) or a box (low/high set) """

    n: int | None = None
    low: tuple[float, ...] | None = None
    high: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.n is not None:
            assert self.low is None and self.high is None, "Discrete space has no bounds"
            if self.n < 1:
                raise ValueError(f"Discrete action count must be positive, got {self.n}")
        else:
            if self.low is None or self.high is None or len(self.low) != len(self.high):
                raise ValueError("Box action space needs matching low/high bounds")
            if any(lo >= hi for lo, hi in zip(self.low, self.high)):
                raise ValueError(f"Box bounds must satisfy low < high, got {self.low}, {self.high}")

    @property
    def discrete(self) -> bool:
        return self.n is not None

    @property
    def dim(self) -> int:
        """ Policy output size: n logits or box dimension """

        return self.n if self.discrete else len(self.low)


@dataclass(frozen=True)
class EnvSpec:
    id: str
    obs_dim: int
    action_space: ActionSpace
    max_episode_steps: int

    def __post_init__(self) -> None:
        if self.max_episode_steps < 1:
            raise ValueError(f"max_episode_steps must be positive, got {self.max_episode_steps}")


@dataclass
class StepResult:
    observation: np.ndarray
    reward: float
    terminated: bool
    truncated: bool

    @property
    def done(self) -> bool:
        return self.terminated or self.truncated


#-------------------------------------------------------------------------

class BaseEnv(ABC):

    """ Uniform stepping interface. Subclasses implement _reset_state,
        _transition and _observe; step counting, truncation at the
        episode limit and action clipping live here. """

    spec: EnvSpec

    def __init__(self):
        self._steps = 0
        self._done = True
        self._rng = np.random.default_rng()

    @abstractmethod
    def _reset_state(self, rng: np.random.Generator) -> None:
        pass

    @abstractmethod
    def _transition(self, action) -> tuple[float, bool]:
        """ Advance internal state, returning (reward, terminated) """
        pass

    @abstractmethod
    def _observe(self) -> np.ndarray:
        pass

    @property
    def steps(self) -> int:
        return self._steps

    def reset(self, rng: np.random.Generator | None = None) -> np.ndarray:
        if rng is not None:
            self._rng = rng

        self._reset_state(self._rng)
        self._steps = 0
        self._done = False

        return self._observe()

    def _prepare_action(self, action):
        space = self.spec.action_space

        if space.discrete:
            index = int(np.asarray(action).reshape(-1)[0])
            if not 0 <= index < space.n:
                raise InvalidActionError(f"Action {index} outside [0, {space.n})")
            return index

        action = np.asarray(action, dtype=np.float64).reshape(len(space.low))

        return np.clip(action, space.low, space.high)

    def step(self, action) -> StepResult:
        if self._done:
            raise EpisodeFinishedError(f"{self.spec.id}: step called on a finished episode, call reset")

        reward, terminated = self._transition(self._prepare_action(action))
        self._steps += 1
        truncated = self._steps >= self.spec.max_episode_steps

        self._done = terminated or truncated

        return StepResult(self._observe(), float(reward), bool(terminated), bool(truncated))
