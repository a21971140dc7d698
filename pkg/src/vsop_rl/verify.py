""" Certification batteries behind `vsop verify`. Each suite returns a
    SuiteReport with worst-case margins instead of raising. """

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from vsop_rl import RANDOM_SEED
from vsop_rl.networks.mlp import Mlp, backward, forward, sample_dropout_mask
from vsop_rl.rollout.gae import gae_recursion
from vsop_rl.tabular.bounds import BOUND_TOL, check_theorem1
from vsop_rl.tabular.gradients import (
    DECOMPOSITION_TOL,
    check_estimator_equivalence,
    check_pg_decomposition,
    trajectory_value_gradient,
    value_gradient
)
from vsop_rl.tabular.mdp import TabularPolicy, random_mdp

GAE_TOL = 1e-12
TELESCOPE_TOL = 1e-10
FD_TOL = 1e-5
FD_EPS = 1e-6

MAX_STATES = 5
MAX_ACTIONS = 4


#-------------------------------------------------------------------------

@dataclass
class SuiteReport:
    name: str
    passed: bool
    cases: int
    worst: dict[str, float] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        margins = ", ".join(f"{k}={v:.3e}" for k, v in self.worst.items())

        return f"[{status}] {self.name} ({self.cases} cases): {margins}"


def _track(worst: dict[str, float], key: str, value: float) -> None:
    worst[key] = max(worst.get(key, -np.inf), value)


def _random_instance(rng: np.random.Generator, horizon: int | None = None):
    S = int(rng.integers(1, MAX_STATES + 1))
    A = int(rng.integers(2, MAX_ACTIONS + 1))
    mdp = random_mdp(rng, S, A, horizon=horizon)

    return mdp, TabularPolicy.random(rng, S, A, scale=float(rng.uniform(0.1, 3.0)))


#-------------------------------------------------------------------------

def theorem_suite(rng: np.random.Generator, num_mdps: int = 1000) -> SuiteReport:
    """ Bound and corollaries 3, 4 on random tabular MDPs """

    worst, failures = {}, []

    for i in range(num_mdps):
        mdp, policy = _random_instance(rng)
        report = check_theorem1(mdp, policy, BOUND_TOL)

        for key, margin in report.margins.items():
            _track(worst, key, margin)

        if not report.holds:
            failures.append(f"MDP {i}: max violation {report.max_violation:.3e}")

    return SuiteReport("theorem", not failures, num_mdps, worst, failures)


#-------------------------------------------------------------------------

def numerical_gradient(loss: Callable[[], float], param: np.ndarray, eps: float = FD_EPS) -> np.ndarray:
    """ Central differences of loss() w.r.t. param, perturbed in place """

    grad = np.zeros_like(param)
    it = np.nditer(param, flags=["multi_index"])

    for _ in it:
        idx = it.multi_index
        start = param[idx]

        param[idx] = start + eps
        up = loss()
        param[idx] = start - eps
        down = loss()
        param[idx] = start

        grad[idx] = (up - down) / (2 * eps)

    return grad


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    scale = max(np.max(np.abs(analytic)), np.max(np.abs(numeric)), 1e-8)

    return float(np.max(np.abs(analytic - numeric)) / scale)


def network_gradient_errors(net: Mlp, x: np.ndarray, weights: np.ndarray, mask=None) -> dict[str, float]:
    """ Backprop against central differences for L = sum(weights * f(x)),
        every parameter block and the input """

    def loss() -> float:
        return float(np.sum(weights * forward(net, x, mask)[0]))

    _, cache = forward(net, x, mask)
    grads, grad_input = backward(net, cache, weights)
    errors = {}

    for i, layer in enumerate(net.layers):
        errors[f"{i}.weight"] = relative_error(grads[f"{i}.weight"], numerical_gradient(loss, layer.weight))
        errors[f"{i}.bias"] = relative_error(grads[f"{i}.bias"], numerical_gradient(loss, layer.bias))

    errors["input"] = relative_error(grad_input, numerical_gradient(loss, x))

    return errors


def gradients_suite(
    rng: np.random.Generator,
    num_networks: int = 20,
    num_mdps: int = 100
) -> SuiteReport:

    """ Network backprop against finite differences on random 2-layer
        tanh configurations (spectral and dropout variants), then the
        three-term decomposition and the path-enumeration oracle on
        random tabular MDPs with horizon <= 3 """

    worst, failures = {}, []

    for i in range(num_networks):
        in_dim, out_dim = (int(d) for d in rng.integers(1, 6, size=2))
        hidden = [int(d) for d in rng.integers(2, 9, size=2)]
        spectral = bool(i % 2)
        dropout = 0.2 if i % 3 == 0 else 0.0

        net = Mlp.build(in_dim, hidden, out_dim, "tanh", rng, dropout, spectral)
        net.update_spectral(5)
        batch = int(rng.integers(1, 5))
        x = rng.standard_normal((batch, in_dim))
        mask = sample_dropout_mask(net, rng, batch) if dropout > 0.0 else None
        errors = network_gradient_errors(net, x, rng.standard_normal((batch, out_dim)), mask)
        max_error = max(errors.values())
        _track(worst, "network_rel_error", max_error)

        if max_error >= FD_TOL:
            failures.append(f"Network {i}: relative error {max_error:.3e}")

    for i in range(num_mdps):
        mdp, policy = _random_instance(rng, horizon=int(rng.integers(1, 4)))
        report = check_pg_decomposition(mdp, policy, k_max=3)
        _, G = trajectory_value_gradient(mdp, policy)
        enum_error = float(np.max(np.abs(G - value_gradient(mdp, policy))))

        _track(worst, "decomposition_error", report.max_error)
        _track(worst, "enumeration_error", enum_error)

        if not report.holds or enum_error > DECOMPOSITION_TOL:
            failures.append(f"MDP {i}: decomposition {report.max_error:.3e}, enumeration {enum_error:.3e}")

    return SuiteReport("gradients", not failures, num_networks + num_mdps, worst, failures)


#-------------------------------------------------------------------------

def gae_double_sum(
    rewards: np.ndarray,
    values: np.ndarray,
    next_values: np.ndarray,
    episode_end: np.ndarray,
    gamma: float,
    lam: float
) -> np.ndarray:

    """ h_t = sum_l (gamma lambda)^l delta_{t+l}, truncated after the
        first episode end at or after t """

    T = rewards.shape[0]
    deltas = rewards + gamma * next_values - values
    advantages = np.zeros(T)

    for t in range(T):
        for l in range(T - t):
            advantages[t] += (gamma * lam) ** l * deltas[t + l]
            if episode_end[t + l]:
                break

    return advantages


def gae_suite(rng: np.random.Generator, num_trajectories: int = 100) -> SuiteReport:
    worst, failures = {}, []

    for i in range(num_trajectories):
        T = int(rng.integers(1, 64))
        gamma, lam = rng.uniform(0.5, 1.0), rng.uniform(0.0, 1.0)
        rewards = rng.standard_normal(T)
        values = rng.standard_normal(T)
        next_values = rng.standard_normal(T)
        episode_end = (rng.random(T) < 0.1).astype(np.float64)

        recursive = gae_recursion(rewards, values, next_values, episode_end, gamma, lam)
        oracle = gae_double_sum(rewards, values, next_values, episode_end, gamma, lam)
        error = float(np.max(np.abs(recursive - oracle)))

        # lambda = 1 on a single episode telescopes to the discounted return
        chained = np.append(values[1:], next_values[-1])
        telescoped = gae_recursion(rewards, values, chained, np.zeros(T), gamma, 1.0)
        discounts = gamma ** np.arange(T)
        mc = np.array([
            np.sum(discounts[:T - t] * rewards[t:]) + gamma ** (T - t) * next_values[-1] - values[t]
            for t in range(T)
        ])
        tele_error = float(np.max(np.abs(telescoped - mc)))

        _track(worst, "double_sum_error", error)
        _track(worst, "telescope_error", tele_error)

        if error >= GAE_TOL or tele_error >= TELESCOPE_TOL:
            failures.append(f"Trajectory {i}: double sum {error:.3e}, telescope {tele_error:.3e}")

    return SuiteReport("gae", not failures, num_trajectories, worst, failures)


#-------------------------------------------------------------------------

def estimator_suite(
    rng: np.random.Generator,
    num_instances: int = 20,
    samples: int = 100_000
) -> SuiteReport:

    """ Sampled clipped-advantage estimator against the all-actions sum,
        within 3 standard errors """

    worst, failures = {}, []

    for i in range(num_instances):
        mdp, policy = _random_instance(rng)
        report = check_estimator_equivalence(mdp, policy, rng, samples)
        _track(worst, "max_z", report.max_z)

        if not report.holds:
            failures.append(f"Instance {i}: z = {report.max_z:.2f}")

    return SuiteReport("estimator", not failures, num_instances, worst, failures)


#-------------------------------------------------------------------------

SUITES = {
    "theorem": theorem_suite,
    "gradients": gradients_suite,
    "gae": gae_suite,
    "estimator": estimator_suite
}


def verify(suite: str = "all", seed: int = RANDOM_SEED, verbose: bool = True) -> list[SuiteReport]:
    if suite == "all":
        names = list(SUITES)
    elif suite in SUITES:
        names = [suite]
    else:
        raise ValueError(f"Unknown suite {suite}, choose from {list(SUITES) + ['all']}")

    reports = []

    for name in names:
        # per-suite stream so "all" reproduces the single-suite runs
        rng = np.random.default_rng(np.random.SeedSequence([seed, list(SUITES).index(name)]))
        report = SUITES[name](rng)
        reports.append(report)

        if verbose:
            print(report.summary())
            for failure in report.failures:
                print(f"    {failure}")

    return reports
