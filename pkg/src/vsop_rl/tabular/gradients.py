from dataclasses import dataclass
import itertools

import numpy as np

from vsop_rl.exceptions import UnsupportedHorizonError
from vsop_rl.tabular.mdp import TabularMdp, TabularPolicy
from vsop_rl.tabular.policy_eval import policy_eval

DECOMPOSITION_TOL = 1e-8
ENUMERATION_MAX_HORIZON = 3


#-------------------------------------------------------------------------
""" Gradients of v w.r.t. the (S, A) logit table are (S, S, A) arrays:
    G[s] = d v(s) / d theta. """

def weighted_pi_grad(pi: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """ sum_a w(x, a) grad pi(a|x) w.r.t. theta[x, :], per state x """

    return pi * (weights - np.sum(pi * weights, axis=1, keepdims=True))


def value_gradient(mdp: TabularMdp, policy: TabularPolicy) -> np.ndarray:
    """ Finite horizon: G_k[s] = e_s (x) pi h_k(s) + gamma sum pi P G_{k-1}.
        Infinite horizon: occupancy-weighted policy gradient theorem. """

    pi = policy.probs
    S, A = pi.shape
    values = policy_eval(mdp, policy)

    if mdp.horizon is None:
        P_pi = np.einsum("sa,sat->st", pi, mdp.P)
        occupancy = np.linalg.inv(np.eye(S) - mdp.gamma * P_pi)
        local = weighted_pi_grad(pi, values.q)

        return occupancy[:, :, None] * local[None, :, :]

    G = np.zeros((S, S, A))

    for stage in reversed(values.stages()):
        local = np.zeros((S, S, A))
        local[np.arange(S), np.arange(S)] = weighted_pi_grad(pi, stage.q)
        G = local + mdp.gamma * np.einsum("sa,sat,tkb->skb", pi, mdp.P, G)

    return G


def exact_policy_gradient(mdp: TabularMdp, policy: TabularPolicy) -> np.ndarray:
    """ Gradient of J = sum_s initial(s) v(s) """

    return np.einsum("s,skb->kb", mdp.initial, value_gradient(mdp, policy))


def performance(mdp: TabularMdp, policy: TabularPolicy) -> float:
    return float(mdp.initial @ policy_eval(mdp, policy).v)


#-------------------------------------------------------------------------

def trajectory_value_gradient(mdp: TabularMdp, policy: TabularPolicy) -> tuple[np.ndarray, np.ndarray]:
    """ Enumerates every (a0, s1, a1, ...) path; returns (v, G) with
        G from the likelihood-ratio identity over whole paths """

    H = mdp.horizon

    if H is None or H > ENUMERATION_MAX_HORIZON:
        raise UnsupportedHorizonError(f"Enumeration needs a finite horizon <= {ENUMERATION_MAX_HORIZON}")

    pi = policy.probs
    S, A = pi.shape
    v = np.zeros(S)
    G = np.zeros((S, S, A))

    for s0 in range(S):
        for actions in itertools.product(range(A), repeat=H):
            for nexts in itertools.product(range(S), repeat=H - 1):
                states = (s0,) + nexts
                prob, ret = 1.0, 0.0
                score = np.zeros((S, A))

                for t in range(H):
                    s, a = states[t], actions[t]
                    prob *= pi[s, a]
                    if t + 1 < H:
                        prob *= mdp.P[s, a, states[t + 1]]
                    ret += mdp.gamma ** t * mdp.R[s, a]
                    score[s] -= pi[s]
                    score[s, a] += 1.0

                v[s0] += prob * ret
                G[s0] += prob * ret * score

    return v, G


#-------------------------------------------------------------------------

@dataclass
class PgDecompositionReport:
    holds: bool
    max_error: float
    gradient: np.ndarray
    clipped_term: np.ndarray
    above_term: np.ndarray
    below_term: np.ndarray


def check_pg_decomposition(
    mdp: TabularMdp,
    policy: TabularPolicy,
    k_max: int,
    tol: float = DECOMPOSITION_TOL
) -> PgDecompositionReport:

    """ Exact grad v against the sum of the three occupancy-weighted
        terms h+ grad pi, 1(q > v) v grad pi and 1(q <= v) q grad pi,
        each evaluated with the remaining-horizon values """

    H = mdp.horizon

    if H is None or H > k_max:
        raise UnsupportedHorizonError(f"Decomposition needs a finite horizon <= {k_max}, got {H}")

    pi = policy.probs
    S, A = pi.shape
    gradient = value_gradient(mdp, policy)
    stages = policy_eval(mdp, policy).stages()

    P_pi = np.einsum("sa,sat->st", pi, mdp.P)
    reach = np.eye(S)
    terms = [np.zeros((S, S, A)) for _ in range(3)]

    for k in range(min(H, k_max)):
        stage = stages[k]
        above = stage.q > stage.v[:, None]
        components = (
            stage.h_plus,
            np.where(above, stage.v[:, None], 0.0),
            np.where(above, 0.0, stage.q)
        )

        for term, weight in zip(terms, components):
            term += mdp.gamma ** k * reach[:, :, None] * weighted_pi_grad(pi, weight)[None, :, :]

        reach = reach @ P_pi

    max_error = float(np.max(np.abs(sum(terms) - gradient)))

    return PgDecompositionReport(max_error <= tol, max_error, gradient, *terms)


#-------------------------------------------------------------------------

@dataclass
class EstimatorReport:
    holds: bool
    max_z: float
    exact: np.ndarray
    estimate: np.ndarray
    standard_error: np.ndarray


def check_estimator_equivalence(
    mdp: TabularMdp,
    policy: TabularPolicy,
    rng: np.random.Generator,
    samples: int = 100_000,
    num_se: float = 3.0
) -> EstimatorReport:

    """ Monte Carlo E_{a~pi}[h+(s, a) grad log pi(a|s)] against the
        all-actions sum sum_a h+(s, a) grad pi(a|s). States are drawn
        from the initial distribution; the comparison is made on a
        random projection of the logit gradient. """

    pi = policy.probs
    S, A = pi.shape
    h_plus = policy_eval(mdp, policy).h_plus

    exact_table = mdp.initial[:, None] * weighted_pi_grad(pi, h_plus)
    direction = rng.standard_normal((S, A))
    exact = np.sum(exact_table * direction)

    states = rng.choice(S, size=samples, p=mdp.initial)
    cdf = np.cumsum(pi[states], axis=1)
    u = rng.random((samples, 1))
    actions = np.minimum(np.sum(cdf < u * cdf[:, -1:], axis=1), A - 1)

    # h+ (onehot(a) - pi(.|s)) projected on direction[s]
    proj = direction[states, actions] - np.sum(pi[states] * direction[states], axis=1)
    x = h_plus[states, actions] * proj

    estimate = float(np.mean(x))
    se = float(np.std(x, ddof=1) / np.sqrt(samples))
    err = abs(estimate - exact)
    z = err / se if se > 0.0 else (0.0 if err < 1e-12 else np.inf)

    return EstimatorReport(z <= num_se, float(z), np.array(exact), np.array(estimate), np.array(se))
