import numpy as np
import pytest

from vsop_rl.exceptions import MdpError, UnsupportedHorizonError
from vsop_rl.tabular.bounds import check_lipschitz_bound, check_theorem1, lower_bound_v_star
from vsop_rl.tabular.mdp import TabularMdp, TabularPolicy, random_mdp
from vsop_rl.tabular.policy_eval import policy_eval


#-------------------------------------------------------------------------

def test_bound_on_random_mdps(rng: np.random.Generator) -> None:
    for _ in range(200):
        S, A = int(rng.integers(1, 6)), int(rng.integers(2, 5))
        mdp = random_mdp(rng, S, A)
        policy = TabularPolicy.random(rng, S, A, scale=float(rng.uniform(0.1, 3.0)))
        report = check_theorem1(mdp, policy)

        assert report.holds, report.margins
        assert report.v_star_max >= 0.0
        assert "clipped_le_value_inf" in report.margins


def test_bound_with_undiscounted_horizons(rng: np.random.Generator) -> None:
    mdp = random_mdp(rng, 4, 3, gamma=1.0)
    report = check_theorem1(mdp, TabularPolicy.random(rng, 4, 3))

    assert report.holds
    assert "clipped_le_value_inf" not in report.margins


def test_greedy_policy_has_zero_lower_bound(rng: np.random.Generator) -> None:
    mdp = random_mdp(rng, 4, 3, horizon=1)
    logits = np.zeros((4, 3))
    logits[np.arange(4), np.argmax(mdp.R, axis=1)] = 1000.0
    policy = TabularPolicy(logits)

    values = policy_eval(mdp, policy)
    v_star = lower_bound_v_star(mdp, policy, values, 1)

    assert np.allclose(v_star, 0.0, atol=1e-12)
    assert np.allclose(values.v, mdp.R.max(axis=1))


def test_lower_bound_horizon_errors(rng: np.random.Generator) -> None:
    mdp = random_mdp(rng, 3, 2, horizon=3)
    policy = TabularPolicy.uniform(3, 2)

    with pytest.raises(UnsupportedHorizonError):
        lower_bound_v_star(mdp, policy, policy_eval(mdp, policy), 3)

    with pytest.raises(UnsupportedHorizonError):
        lower_bound_v_star(mdp, policy, policy_eval(mdp.with_horizon(1), policy), 2)


#-------------------------------------------------------------------------

def _chain(gamma: float = 1.0) -> TabularMdp:
    """ Middle state jumps to either absorbing end with probability 1/2 """

    P = np.zeros((3, 1, 3))
    P[0, 0, 0] = P[2, 0, 2] = 1.0
    P[1, 0, 0] = P[1, 0, 2] = 0.5

    return TabularMdp(P, np.zeros((3, 1)), gamma, embedding=np.array([[-1.0], [0.0], [1.0]]))


def test_lipschitz_chain() -> None:
    report = check_lipschitz_bound(_chain(), TabularPolicy.uniform(3, 1), np.array([-1.0, 0.0, 1.0]))

    assert report.applicable and report.holds
    assert np.all(report.martingale)
    assert report.K == pytest.approx(1.0)
    assert np.allclose(report.c, [0.0, 0.5, 0.0])
    assert np.allclose(report.half_abs_diff, [0.0, 0.5, 0.0])
    assert np.allclose(report.bound, [0.0, 0.5, 0.0])
    assert np.allclose(report.c_lambda, [0.025, 0.475, 0.025])


def test_lipschitz_not_applicable() -> None:
    report = check_lipschitz_bound(_chain(0.9), TabularPolicy.uniform(3, 1))

    assert not report.applicable and report.holds
    assert np.isnan(report.max_violation)

    with pytest.raises(MdpError):
        check_lipschitz_bound(random_mdp(np.random.default_rng(0), 2, 2), TabularPolicy.uniform(2, 2))


def test_lipschitz_constant_values() -> None:
    report = check_lipschitz_bound(_chain(), TabularPolicy.uniform(3, 1), np.full(3, 2.0))

    assert report.applicable and report.holds
    assert report.K == 0.0
    assert np.array_equal(report.c, np.zeros(3))
    assert np.array_equal(report.bound, np.zeros(3))


def _martingale_line(rng: np.random.Generator) -> TabularMdp:
    """ Four states on a line, absorbing ends. Interior moves mix
        staying, symmetric steps and mean-preserving long jumps,
        so E[s'] = s under every action """

    P = np.zeros((4, 2, 4))
    P[0, :, 0] = P[3, :, 3] = 1.0
    long_jumps = {1: {0: 2.0 / 3.0, 3: 1.0 / 3.0}, 2: {3: 2.0 / 3.0, 0: 1.0 / 3.0}}

    for s in (1, 2):
        for a in range(2):
            stay, step, jump = rng.dirichlet(np.ones(3))
            P[s, a, s] += stay
            P[s, a, s - 1] += step / 2.0
            P[s, a, s + 1] += step / 2.0

            for t, p in long_jumps[s].items():
                P[s, a, t] += jump * p

    return TabularMdp(P, np.zeros((4, 2)), 1.0, embedding=np.arange(4.0)[:, None])


def test_lipschitz_random_martingale_instances(rng: np.random.Generator) -> None:
    for _ in range(20):
        mdp = _martingale_line(rng)
        policy = TabularPolicy.random(rng, 4, 2)
        v = float(rng.uniform(0.5, 3.0)) * np.arange(4.0) + float(rng.uniform(0.0, 1.0))
        report = check_lipschitz_bound(mdp, policy, v)

        assert report.applicable and report.holds
        assert np.all(report.martingale)
        assert np.all(report.c <= report.bound + 1e-10)


def test_lipschitz_needs_defined_values() -> None:
    with pytest.raises(MdpError):
        check_lipschitz_bound(_chain(), TabularPolicy.uniform(3, 1))

    mdp = _chain().with_horizon(5)
    report = check_lipschitz_bound(mdp, TabularPolicy.uniform(3, 1))
    assert report.applicable and report.holds
