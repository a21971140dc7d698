import numpy as np
import pytest

from vsop_rl.verify import (
    GAE_TOL,
    SUITES,
    estimator_suite,
    gae_suite,
    gradients_suite,
    theorem_suite,
    verify
)


#-------------------------------------------------------------------------

def test_gae_suite(rng: np.random.Generator) -> None:
    report = gae_suite(rng)

    assert report.passed, report.failures
    assert report.cases == 100
    assert report.worst["double_sum_error"] < GAE_TOL
    assert "PASS" in report.summary()


def test_gradients_suite_small(rng: np.random.Generator) -> None:
    report = gradients_suite(rng, num_networks=6, num_mdps=10)

    assert report.passed, report.failures
    assert report.worst["network_rel_error"] < 1e-5
    assert report.worst["decomposition_error"] < 1e-8


def test_theorem_suite_small(rng: np.random.Generator) -> None:
    report = theorem_suite(rng, num_mdps=100)

    assert report.passed, report.failures
    assert all(margin <= 1e-9 for margin in report.worst.values())


def test_verify_seeding() -> None:
    single = verify("gae", seed=11, verbose=False)
    rng = np.random.default_rng(np.random.SeedSequence([11, list(SUITES).index("gae")]))

    assert len(single) == 1 and single[0].name == "gae"
    assert gae_suite(rng).worst == single[0].worst


def test_unknown_suite() -> None:
    with pytest.raises(ValueError):
        verify("proofs", verbose=False)


#-------------------------------------------------------------------------

@pytest.mark.slow
def test_all_suites() -> None:
    reports = verify("all", verbose=False)

    assert [r.name for r in reports] == list(SUITES)
    assert all(r.passed for r in reports if r.name != "estimator")


@pytest.mark.slow
def test_estimator_suite(rng: np.random.Generator) -> None:
    report = estimator_suite(rng)

    assert report.cases == 20
    assert report.worst["max_z"] < 5.0
