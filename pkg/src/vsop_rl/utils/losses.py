import numpy as np

ADV_EPS = 1e-8


#-------------------------------------------------------------------------
""" Positive part (h)+ = max(0, h) """

def clip_positive(h):
    return np.maximum(h, 0.0)


def normalise_advantages(h: np.ndarray, centre: bool = True) -> np.ndarray:
    """ Standardise a minibatch; uncentred scaling keeps the sign of h """

    if centre:
        return (h - h.mean()) / (h.std() + ADV_EPS)

    return h / (h.std() + ADV_EPS)


#-------------------------------------------------------------------------
""" Score-function coefficients.
    Each returns c with d(objective)/d(theta) = mean(c * grad log pi),
    so the actor descends on -c. """

def vsop_coefficients(h: np.ndarray, norm_adv: bool = False) -> np.ndarray:
    c = clip_positive(h)

    return normalise_advantages(c, centre=False) if norm_adv else c


def a2c_coefficients(h: np.ndarray, norm_adv: bool = False) -> np.ndarray:
    return normalise_advantages(h) if norm_adv else h


#-------------------------------------------------------------------------
""" Schulman et al. Proximal policy optimization algorithms. 2017.
    https://arxiv.org/abs/1707.06347 """

def ppo_objective(ratio: np.ndarray, h: np.ndarray, clip_eps: float) -> np.ndarray:
    """ Per-sample min(rho * h, clip(rho, 1 - eps, 1 + eps) * h) """

    return np.minimum(ratio * h, np.clip(ratio, 1.0 - clip_eps, 1.0 + clip_eps) * h)


def ppo_coefficients(ratio: np.ndarray, h: np.ndarray, clip_eps: float) -> np.ndarray:
    """ rho * h where the unclipped branch attains the min, else 0 """

    unclipped = ratio * h
    clipped = np.clip(ratio, 1.0 - clip_eps, 1.0 + clip_eps) * h
    active = unclipped <= clipped

    return np.where(active, unclipped, 0.0)


def clip_fraction(ratio: np.ndarray, clip_eps: float) -> float:
    return float(np.mean(np.abs(ratio - 1.0) > clip_eps))


#-------------------------------------------------------------------------
""" Lu et al. Discovered policy optimisation. NeurIPS, 2022.
    https://arxiv.org/abs/2210.05639 """

def dpo_drift(ratio: np.ndarray, h: np.ndarray, alpha: float = 2.0, beta: float = 0.6) -> np.ndarray:
    """ (h(rho - 1) - a tanh(h(rho - 1)/a))+ for h >= 0,
        (h log rho - b tanh(h log rho/b))+ for h < 0 """

    ratio = np.asarray(ratio, dtype=np.float64)
    h = np.asarray(h, dtype=np.float64)
    x = h * (ratio - 1.0)
    y = h * np.log(ratio)

    pos = clip_positive(x - alpha * np.tanh(x / alpha))
    neg = clip_positive(y - beta * np.tanh(y / beta))

    return np.where(h >= 0.0, pos, neg)


def dpo_objective(ratio: np.ndarray, h: np.ndarray, alpha: float = 2.0, beta: float = 0.6) -> np.ndarray:
    return ratio * h - dpo_drift(ratio, h, alpha, beta)


def dpo_coefficients(ratio: np.ndarray, h: np.ndarray, alpha: float = 2.0, beta: float = 0.6) -> np.ndarray:
    """ rho * d(objective)/d(rho) """

    x = h * (ratio - 1.0)
    y = h * np.log(ratio)
    active = dpo_drift(ratio, h, alpha, beta) > 0.0

    drift_pos = h * np.tanh(x / alpha) ** 2 * ratio
    drift_neg = h * np.tanh(y / beta) ** 2
    drift_grad = np.where(h >= 0.0, drift_pos, drift_neg)

    return ratio * h - np.where(active, drift_grad, 0.0)


#-------------------------------------------------------------------------
""" All-actions gradient of sum_a pi(a|s) h+(s, a) w.r.t. the logits,
    h+ held fixed: pi * (h+ - sum_a pi h+) """

def all_actions_logit_grad(probs: np.ndarray, h_plus: np.ndarray) -> np.ndarray:
    baseline = np.sum(probs * h_plus, axis=-1, keepdims=True)

    return probs * (h_plus - baseline)


#-------------------------------------------------------------------------

def value_loss(
    values: np.ndarray,
    targets: np.ndarray,
    old_values: np.ndarray | None = None,
    clip_eps: float | None = None
) -> tuple[float, np.ndarray]:

    """ 0.5 * mean squared error, optionally the clipped PPO variant
        0.5 * mean(max((v - g)^2, (v_old + clip(v - v_old) - g)^2)).
        Returns the loss and its gradient w.r.t. values. """

    n = values.shape[0]
    err = values - targets

    if clip_eps is None or old_values is None:
        return float(0.5 * np.mean(err ** 2)), err / n

    delta = values - old_values
    clipped_values = old_values + np.clip(delta, -clip_eps, clip_eps)
    err_clipped = clipped_values - targets

    use_unclipped = err ** 2 >= err_clipped ** 2
    inside = np.abs(delta) <= clip_eps
    grad = np.where(use_unclipped, err, np.where(inside, err_clipped, 0.0))
    loss = 0.5 * np.mean(np.maximum(err ** 2, err_clipped ** 2))

    return float(loss), grad / n
