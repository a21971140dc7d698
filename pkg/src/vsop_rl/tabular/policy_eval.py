from dataclasses import dataclass

import numpy as np

from vsop_rl.exceptions import DimensionError, SingularSystemError
from vsop_rl.tabular.mdp import TabularMdp, TabularPolicy

RESIDUAL_TOL = 1e-10


#-------------------------------------------------------------------------

@dataclass
class ExactValues:

    """ Exact v, q, h+ and C for one horizon.
        v_next is the value of the next state (remaining horizon one
        shorter for finite horizons, v itself when stationary);
        previous chains the shorter-horizon stages. """

    v: np.ndarray
    q: np.ndarray
    h_plus: np.ndarray
    c: np.ndarray
    v_next: np.ndarray
    horizon: int | None
    previous: "ExactValues | None" = None

    @property
    def h(self) -> np.ndarray:
        return self.q - self.v[:, None]

    def stages(self) -> list["ExactValues"]:
        """ [this stage, horizon - 1, ..., 1] """

        out, node = [], self

        while node is not None:
            out.append(node)
            node = node.previous

        return out


def _check_policy(mdp: TabularMdp, policy: TabularPolicy) -> np.ndarray:
    pi = policy.probs

    if pi.shape != (mdp.n_states, mdp.n_actions):
        raise DimensionError(f"Policy shape {pi.shape} does not match MDP {(mdp.n_states, mdp.n_actions)}")

    return pi


def constant_C(mdp: TabularMdp, policy: TabularPolicy, values: ExactValues) -> np.ndarray:
    """ C[s] = sum_a pi(a|s) sum_s' P[s, a, s'] max(0, gamma v(s') - v(s)) """

    pi = _check_policy(mdp, policy)
    gap = np.maximum(mdp.gamma * values.v_next[None, :] - values.v[:, None], 0.0)

    return np.einsum("sa,sat,st->s", pi, mdp.P, gap)


def _stage(
    mdp: TabularMdp,
    pi: np.ndarray,
    q: np.ndarray,
    v_next: np.ndarray,
    horizon: int | None,
    previous: ExactValues | None
) -> ExactValues:

    v = np.sum(pi * q, axis=1)
    h_plus = np.maximum(q - v[:, None], 0.0)
    gap = np.maximum(mdp.gamma * v_next[None, :] - v[:, None], 0.0)
    c = np.einsum("sa,sat,st->s", pi, mdp.P, gap)

    return ExactValues(v, q, h_plus, c, v_next, horizon, previous)


#-------------------------------------------------------------------------

def policy_eval(mdp: TabularMdp, policy: TabularPolicy) -> ExactValues:
    """ Direct linear solve for the discounted problem, backward
        induction for finite horizons """

    pi = _check_policy(mdp, policy)

    if mdp.horizon is None:
        if mdp.gamma >= 1.0:
            raise SingularSystemError("Infinite-horizon evaluation needs gamma < 1")

        r_pi = np.sum(pi * mdp.R, axis=1)
        P_pi = np.einsum("sa,sat->st", pi, mdp.P)

        try:
            v = np.linalg.solve(np.eye(mdp.n_states) - mdp.gamma * P_pi, r_pi)
        except np.linalg.LinAlgError as e:
            raise SingularSystemError(f"Policy evaluation system is singular: {e}") from e

        residual = np.max(np.abs(v - (r_pi + mdp.gamma * P_pi @ v)))
        assert residual < RESIDUAL_TOL * max(1.0, np.max(np.abs(v))), f"Residual {residual}"

        q = mdp.R + mdp.gamma * mdp.P @ v

        return _stage(mdp, pi, q, v, None, None)

    stage = None
    v_prev = np.zeros(mdp.n_states)

    for k in range(1, mdp.horizon + 1):
        q = mdp.R + mdp.gamma * mdp.P @ v_prev
        stage = _stage(mdp, pi, q, v_prev, k, stage)
        v_prev = stage.v

    return stage


#-------------------------------------------------------------------------

def value_iteration_eval(mdp: TabularMdp, policy: TabularPolicy, iterations: int, tol: float = 0.0) -> np.ndarray:
    """ Iterative evaluation v <- r_pi + gamma P_pi v, used as an
        independent oracle for the direct solve """

    pi = _check_policy(mdp, policy)
    r_pi = np.sum(pi * mdp.R, axis=1)
    P_pi = np.einsum("sa,sat->st", pi, mdp.P)
    v = np.zeros(mdp.n_states)

    for _ in range(iterations):
        v_new = r_pi + mdp.gamma * P_pi @ v

        if np.max(np.abs(v_new - v)) <= tol:
            return v_new

        v = v_new

    return v
