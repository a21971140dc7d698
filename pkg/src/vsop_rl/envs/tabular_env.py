from pathlib import Path

import numpy as np

from vsop_rl.envs.base_env import ActionSpace, BaseEnv, EnvSpec
from vsop_rl.envs.constants import TABULAR_TRUNCATION_STEPS
from vsop_rl.tabular.mdp import TabularMdp


class TabularEnv(BaseEnv):

    """ Exposes a TabularMdp as an environment with one-hot observations.
        Finite-horizon MDPs terminate at the horizon; infinite-horizon
        MDPs truncate after TABULAR_TRUNCATION_STEPS. The MDP itself
        is available as `model` for algorithms that can use it. """

    def __init__(self, mdp: TabularMdp, env_id: str = "Tabular"):
        super().__init__()
        self.model = mdp
        max_steps = mdp.horizon if mdp.horizon is not None else TABULAR_TRUNCATION_STEPS
        self.spec = EnvSpec(env_id, mdp.n_states, ActionSpace(n=mdp.n_actions), max_steps)
        self.state = 0

    @classmethod
    def from_file(cls, path: str | Path) -> "TabularEnv":
        return cls(TabularMdp.load(path), f"Tabular:{path}")

    def _reset_state(self, rng: np.random.Generator) -> None:
        self.state = int(rng.choice(self.model.n_states, p=self.model.initial))

    def _transition(self, action: int) -> tuple[float, bool]:
        reward = self.model.R[self.state, action]
        self.state = int(self._rng.choice(self.model.n_states, p=self.model.P[self.state, action]))
        terminated = self.model.horizon is not None and self._steps + 1 >= self.model.horizon

        return float(reward), terminated

    def _observe(self) -> np.ndarray:
        obs = np.zeros(self.model.n_states)
        obs[self.state] = 1.0

        return obs
