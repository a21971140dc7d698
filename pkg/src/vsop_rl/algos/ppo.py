import numpy as np

from vsop_rl.algos.base_agent import BaseAgent, PolicyTerm
from vsop_rl.utils.losses import clip_fraction, normalise_advantages, ppo_coefficients, ppo_objective


class PPOAgent(BaseAgent):

    """ Clipped-ratio surrogate. VSPPO is this agent configured with
        dropout, spectral critic and Thompson sampling. """

    name = "ppo"

    def policy_term(self, dist, actions, h, ratio, obs, raw_obs) -> PolicyTerm:
        eps = self.config.clip_coef

        if self.config.norm_adv:
            h = normalise_advantages(h)

        coef = ppo_coefficients(ratio, h, eps)
        output_grad, log_std_grad = self.score_function_term(dist, actions, coef)
        loss = -float(np.mean(ppo_objective(ratio, h, eps)))

        return PolicyTerm(output_grad, log_std_grad, loss, clip_fraction(ratio, eps))
