from dataclasses import dataclass, field

import numpy as np

from vsop_rl.exceptions import MdpError, UnsupportedHorizonError
from vsop_rl.tabular.mdp import TabularMdp, TabularPolicy
from vsop_rl.tabular.policy_eval import ExactValues, constant_C, policy_eval

BOUND_TOL = 1e-9
EQUALITY_TOL = 1e-10


#-------------------------------------------------------------------------

def lower_bound_v_star(
    mdp: TabularMdp,
    policy: TabularPolicy,
    values: ExactValues,
    horizon: int
) -> np.ndarray:

    """ Horizon 1: sum_a pi h+(s, a).
        Horizon 2: adds gamma sum_a pi sum_s' P sum_a' pi h+_1(s', a'). """

    if horizon not in (1, 2):
        raise UnsupportedHorizonError(f"Lower bound only defined for horizons 1 and 2, got {horizon}")
    if values.horizon != horizon:
        raise UnsupportedHorizonError(
            f"Values computed for horizon {values.horizon}, bound requested for {horizon}"
        )

    pi = policy.probs
    v_star = np.sum(pi * values.h_plus, axis=1)

    if horizon == 2:
        inner = np.sum(pi * values.previous.h_plus, axis=1)
        v_star = v_star + mdp.gamma * np.einsum("sa,sat,t->s", pi, mdp.P, inner)

    return v_star


#-------------------------------------------------------------------------

@dataclass
class Theorem1Report:

    """ margins are lhs - rhs per check (<= tol means it holds) """

    holds: bool
    max_violation: float
    v_star_max: float
    margins: dict[str, float] = field(default_factory=dict)


def check_theorem1(mdp: TabularMdp, policy: TabularPolicy, tol: float = BOUND_TOL) -> Theorem1Report:
    """ v* <= v + C at horizons 1 and 2, with sum_a pi h+ <= v and
        sum_a pi h+ <= sum_a pi r + C at each horizon and, for gamma < 1,
        on the stationary values """

    pi = policy.probs
    r_pi = np.sum(pi * mdp.R, axis=1)
    margins = {}
    v_star_max = 0.0

    for horizon in (1, 2):
        values = policy_eval(mdp.with_horizon(horizon), policy)
        v_star = lower_bound_v_star(mdp, policy, values, horizon)
        clipped = np.sum(pi * values.h_plus, axis=1)

        margins[f"theorem_h{horizon}"] = float(np.max(v_star - values.v - values.c))
        margins[f"clipped_le_value_h{horizon}"] = float(np.max(clipped - values.v))
        margins[f"clipped_le_reward_h{horizon}"] = float(np.max(clipped - r_pi - values.c))
        v_star_max = max(v_star_max, float(np.max(v_star)))

    if mdp.gamma < 1.0:
        values = policy_eval(mdp.with_horizon(None), policy)
        clipped = np.sum(pi * values.h_plus, axis=1)

        margins["clipped_le_value_inf"] = float(np.max(clipped - values.v))
        margins["clipped_le_reward_inf"] = float(np.max(clipped - r_pi - values.c))

    max_violation = max(margins.values())

    return Theorem1Report(max_violation <= tol, max_violation, v_star_max, margins)


#-------------------------------------------------------------------------

@dataclass
class LipschitzReport:
    applicable: bool
    holds: bool
    martingale: np.ndarray
    K: float
    c: np.ndarray
    half_abs_diff: np.ndarray
    bound: np.ndarray
    c_lambda: np.ndarray
    max_equality_error: float
    max_violation: float


def lipschitz_constant(v: np.ndarray, embedding: np.ndarray) -> float:
    """ max over distinct pairs |v(s') - v(s)| / ||e(s') - e(s)|| """

    diff_v = np.abs(v[:, None] - v[None, :])
    dist = np.linalg.norm(embedding[:, None, :] - embedding[None, :, :], axis=-1)
    pairs = dist > 0.0

    if not np.any(pairs):
        return 0.0

    return float(np.max(diff_v[pairs] / dist[pairs]))


def check_lipschitz_bound(
    mdp: TabularMdp,
    policy: TabularPolicy,
    values: np.ndarray | ExactValues | None = None,
    lam: float = 0.95,
    tol: float = EQUALITY_TOL
) -> LipschitzReport:

    """ For states where E[gamma v(s')] = v(s), checks
        C(s) = 1/2 E|gamma v(s') - v(s)| and, with gamma = 1,
        C(s) <= 1/2 E[K ||s' - s||]. values may be an explicit value
        vector (used as v at both s and s'); by default the exact
        policy values are used. Also reports the GAE-weighted
        constant 1/2 E|gamma lambda v(s') - v(s)|. """

    if mdp.embedding is None:
        raise MdpError("Lipschitz check needs state embeddings")

    if values is None:
        if mdp.horizon is None and mdp.gamma >= 1.0:
            raise MdpError(
                "Exact values are undefined for gamma = 1 without a horizon; "
                "pass values explicitly or set a finite horizon"
            )
        values = policy_eval(mdp, policy)
    if isinstance(values, ExactValues):
        v = values.v
    else:
        v = np.asarray(values, dtype=np.float64)

    pi = policy.probs
    gamma = mdp.gamma
    weights = np.einsum("sa,sat->st", pi, mdp.P)

    expected_next = weights @ (gamma * v)
    martingale = np.abs(expected_next - v) <= tol * max(1.0, float(np.max(np.abs(v))))

    exact = ExactValues(v, np.zeros_like(mdp.R), np.zeros_like(mdp.R), np.zeros_like(v), v, None)
    c = constant_C(mdp, policy, exact)

    half_abs_diff = 0.5 * np.sum(weights * np.abs(gamma * v[None, :] - v[:, None]), axis=1)
    c_lambda = 0.5 * np.sum(weights * np.abs(gamma * lam * v[None, :] - v[:, None]), axis=1)

    K = lipschitz_constant(v, mdp.embedding)
    dist = np.linalg.norm(mdp.embedding[None, :, :] - mdp.embedding[:, None, :], axis=-1)
    bound = 0.5 * K * np.sum(weights * dist, axis=1)

    applicable = bool(np.any(martingale)) and gamma == 1.0

    if applicable:
        equality_error = float(np.max(np.abs(c - half_abs_diff)[martingale]))
        violation = float(np.max((c - bound)[martingale]))
        holds = equality_error <= tol and violation <= tol
    else:
        equality_error, violation, holds = float("nan"), float("nan"), True

    return LipschitzReport(
        applicable, holds, martingale, K, c, half_abs_diff, bound, c_lambda, equality_error, violation
    )
