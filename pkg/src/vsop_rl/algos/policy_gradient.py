import numpy as np

from vsop_rl.algos.base_agent import BaseAgent, PolicyTerm
from vsop_rl.utils.losses import a2c_coefficients, vsop_coefficients


#-------------------------------------------------------------------------

class PolicyGradientAgent(BaseAgent):

    """ Score-function actor-critic weighted by the advantage.
        clipped=True weights by (h)+ only (VSOP); clipped=False is
        the plain advantage actor-critic (A2C). """

    def __init__(self, *args, clipped: bool = True, **kwargs):
        super().__init__(*args, **kwargs)
        self.clipped = clipped
        self.name = "vsop" if clipped else "a2c"

    def coefficients(self, h: np.ndarray) -> np.ndarray:
        if self.clipped:
            return vsop_coefficients(h, self.config.norm_adv)

        return a2c_coefficients(h, self.config.norm_adv)

    def policy_term(self, dist, actions, h, ratio, obs, raw_obs) -> PolicyTerm:
        coef = self.coefficients(h)
        output_grad, log_std_grad = self.score_function_term(dist, actions, coef)
        clip_fraction = float(np.mean(h < 0.0)) if self.clipped else 0.0

        return PolicyTerm(output_grad, log_std_grad, -float(np.mean(coef * ratio)), clip_fraction)


def vsop_agent(*args, **kwargs) -> PolicyGradientAgent:
    return PolicyGradientAgent(*args, clipped=True, **kwargs)


def a2c_agent(*args, **kwargs) -> PolicyGradientAgent:
    return PolicyGradientAgent(*args, clipped=False, **kwargs)
