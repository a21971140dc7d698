from typing import Callable

import numpy as np

from vsop_rl.algos.base_agent import BaseAgent, PolicyTerm, UpdateReport
from vsop_rl.exceptions import UnsupportedError
from vsop_rl.networks.mlp import Mlp, backward, forward
from vsop_rl.rollout.buffer import RolloutBuffer
from vsop_rl.tabular.mdp import TabularMdp
from vsop_rl.utils.losses import all_actions_logit_grad, clip_positive, vsop_coefficients
from vsop_rl.utils.optimisers import OptimizerState, clip_by_global_norm, step


def _identity(x: np.ndarray) -> np.ndarray:
    return x


#-------------------------------------------------------------------------

class RMPGAgent(BaseAgent):

    """ All-actions policy gradient sum_a h+(s, a) grad pi(a|s).
        Per-action values come from the environment model when one is
        attached, otherwise from a learned state-action head. On
        continuous actions only the single-action reduction (which is
        the VSOP update) is available. """

    name = "rmpg"

    def __init__(self, spec, config, rng, model: TabularMdp | None = None):
        super().__init__(spec, config, rng)
        self.reduction = None
        self.model = model
        self.q_net = None

        if not self.discrete:
            if not config.rmpg_continuous_reduction:
                raise UnsupportedError(
                    "RMPG on continuous actions needs rmpg_continuous_reduction: true"
                )
            self.reduction = "vsop"

        elif model is None:
            hidden = [config.width] * config.depth
            self.q_net = Mlp.build(
                spec.obs_dim, hidden, spec.action_space.n, config.activation, rng, out_gain=1.0
            )
            self.q_opt = OptimizerState(config.optimizer, config.optim_eps)

        self.obs_transform: Callable[[np.ndarray], np.ndarray] = _identity
        self.reward_transform: Callable[[np.ndarray], np.ndarray] = _identity

    def attach_normalisers(
        self,
        obs_transform: Callable[[np.ndarray], np.ndarray],
        reward_transform: Callable[[np.ndarray], np.ndarray]
    ) -> None:

        """ Frozen-statistics maps so model-based values live in the
            same units as the critic """

        self.obs_transform = obs_transform
        self.reward_transform = reward_transform

    #-------------------------------------------------------------------------

    def q_values(self, obs: np.ndarray, raw_obs: np.ndarray) -> np.ndarray:
        if self.model is not None:
            mdp = self.model
            next_obs = self.obs_transform(np.eye(mdp.n_states))
            v_next = self.value(next_obs, critic=self.frozen_critic)
            states = np.argmax(raw_obs, axis=1)

            return self.reward_transform(mdp.R[states]) + self.config.gamma * mdp.P[states] @ v_next

        q, _ = forward(self.q_net, obs)

        return q

    def policy_term(self, dist, actions, h, ratio, obs, raw_obs) -> PolicyTerm:
        if not self.discrete:
            coef = vsop_coefficients(h, self.config.norm_adv)
            output_grad, log_std_grad = self.score_function_term(dist, actions, coef)

            return PolicyTerm(output_grad, log_std_grad, -float(np.mean(coef * ratio)), float(np.mean(h < 0.0)))

        probs = dist.probs
        q = self.q_values(obs, raw_obs)
        h_all = q - np.sum(probs * q, axis=1, keepdims=True)
        h_plus = clip_positive(h_all)

        B = obs.shape[0]
        output_grad = -all_actions_logit_grad(probs, h_plus) / B
        loss = -float(np.mean(np.sum(probs * h_plus, axis=1)))

        return PolicyTerm(output_grad, None, loss, float(np.mean(h_all < 0.0)))

    def fit_auxiliary(self, obs, actions, targets, lr, decay) -> None:
        """ Regress q(s, a_taken) on the return targets """

        if self.q_net is None:
            return

        q, cache = forward(self.q_net, obs)
        B = obs.shape[0]
        rows = np.arange(B)

        grad_out = np.zeros_like(q)
        grad_out[rows, actions] = (q[rows, actions] - targets) / B

        grads, _ = backward(self.q_net, cache, grad_out)
        grads, _ = clip_by_global_norm(grads, self.config.max_grad_norm)
        self.q_net.set_parameters(step(self.q_opt, self.q_net.parameters(), grads, lr, decay))

    def update(self, buffer: RolloutBuffer, lr: float) -> UpdateReport:
        report = super().update(buffer, lr)
        report.reduction = self.reduction

        return report

    def state_dict(self) -> dict[str, np.ndarray]:
        state = super().state_dict()

        if self.q_net is not None:
            state.update({f"q.{k}": v for k, v in self.q_net.parameters().items()})

        return state

    def load_state_dict(self, state: dict[str, np.ndarray]) -> None:
        super().load_state_dict(state)

        if self.q_net is not None:
            self.q_net.set_parameters({k[2:]: v for k, v in state.items() if k.startswith("q.")})
