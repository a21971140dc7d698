from dataclasses import dataclass, field

import numpy as np

from vsop_rl.exceptions import DimensionError, NonFiniteGradientError

OPTIMISERS = ("adam", "rmsprop")


#-------------------------------------------------------------------------

@dataclass
class OptimizerState:

    """ Per-parameter moments keyed like Mlp.parameters().
        Adam keeps m (first) and v (second); RMSProp keeps v only. """

    kind: str = "adam"
    eps: float = 1e-8
    beta1: float = 0.9
    beta2: float = 0.999
    alpha: float = 0.99
    step_count: int = 0
    m: dict[str, np.ndarray] = field(default_factory=dict, repr=False)
    v: dict[str, np.ndarray] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if self.kind not in OPTIMISERS:
            raise ValueError(f"Optimiser must be one of {OPTIMISERS}, got {self.kind}")
        if self.eps <= 0.0:
            raise ValueError(f"Optimiser eps must be positive, got {self.eps}")


def step(
    state: OptimizerState,
    params: dict[str, np.ndarray],
    grads: dict[str, np.ndarray],
    lr: float,
    decay_coeff: float = 0.0,
    no_decay: tuple[str, ...] = ()
) -> dict[str, np.ndarray]:

    """ One descent step on grads, with the 2 * decay * p term of the
        squared-norm penalty added outside the adaptive scaling.
        Blocks named in no_decay are not decayed.
        Returns new parameter arrays; state is updated in place. """

    for name, p in params.items():
        if name not in grads:
            raise DimensionError(f"Missing gradient for {name}")
        if grads[name].shape != p.shape:
            raise DimensionError(f"Gradient for {name} has shape {grads[name].shape}, expected {p.shape}")
        if not np.all(np.isfinite(grads[name])):
            raise NonFiniteGradientError(f"Non-finite gradient in parameter block {name}")

    state.step_count += 1
    t = state.step_count
    updated = {}

    for name, p in params.items():
        g = grads[name]

        if name not in state.v:
            state.m[name] = np.zeros_like(p)
            state.v[name] = np.zeros_like(p)

        if state.kind == "adam":
            state.m[name] = state.beta1 * state.m[name] + (1.0 - state.beta1) * g
            state.v[name] = state.beta2 * state.v[name] + (1.0 - state.beta2) * g * g
            m_hat = state.m[name] / (1.0 - state.beta1 ** t)
            v_hat = state.v[name] / (1.0 - state.beta2 ** t)
            delta = m_hat / (np.sqrt(v_hat) + state.eps)

        else:
            state.v[name] = state.alpha * state.v[name] + (1.0 - state.alpha) * g * g
            delta = g / (np.sqrt(state.v[name]) + state.eps)

        decay = 0.0 if name in no_decay else decay_coeff
        updated[name] = p - lr * delta - lr * 2.0 * decay * p

    return updated


#-------------------------------------------------------------------------

@dataclass
class LrSchedule:
    base_lr: float
    total_updates: int
    anneal: bool = True

    def __post_init__(self) -> None:
        assert self.total_updates >= 1, "Schedule needs at least one update"

    def __call__(self, t: int) -> float:
        if not self.anneal:
            return self.base_lr

        return max(self.base_lr * (1.0 - t / self.total_updates), 0.0)


#-------------------------------------------------------------------------

def beta_from_dropout(p: float, buffer_size: int) -> float:
    """ Parameter precision (1 - p) / (2|D|) of the dropout posterior """

    if not 0.0 <= p < 1.0:
        raise ValueError(f"Dropout rate must be in [0, 1), got {p}")
    if buffer_size < 1:
        raise ValueError(f"Buffer size must be positive, got {buffer_size}")

    return (1.0 - p) / (2.0 * buffer_size)


def global_norm(grads: dict[str, np.ndarray]) -> float:
    return float(np.sqrt(sum(np.sum(g ** 2) for g in grads.values())))


def clip_by_global_norm(
    grads: dict[str, np.ndarray],
    max_norm: float
) -> tuple[dict[str, np.ndarray], float]:

    """ Rescale so the joint L2 norm is at most max_norm (inf disables) """

    norm = global_norm(grads)

    if not np.isfinite(max_norm) or norm <= max_norm:
        return grads, norm

    scale = max_norm / (norm + 1e-6)

    return {k: g * scale for k, g in grads.items()}, norm
