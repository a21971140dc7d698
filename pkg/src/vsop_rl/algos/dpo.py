import numpy as np

from vsop_rl.algos.base_agent import BaseAgent, PolicyTerm
from vsop_rl.utils.losses import clip_fraction, dpo_coefficients, dpo_objective, normalise_advantages


class DPOAgent(BaseAgent):

    """ Maximises mean(rho * h - drift) with the two-branch drift """

    name = "dpo"

    def policy_term(self, dist, actions, h, ratio, obs, raw_obs) -> PolicyTerm:
        cfg = self.config

        if cfg.norm_adv:
            h = normalise_advantages(h)

        coef = dpo_coefficients(ratio, h, cfg.dpo_alpha, cfg.dpo_beta)
        output_grad, log_std_grad = self.score_function_term(dist, actions, coef)
        loss = -float(np.mean(dpo_objective(ratio, h, cfg.dpo_alpha, cfg.dpo_beta)))

        return PolicyTerm(output_grad, log_std_grad, loss, clip_fraction(ratio, cfg.clip_coef))
