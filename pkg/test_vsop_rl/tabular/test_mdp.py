import numpy as np
import pytest

from vsop_rl.exceptions import DimensionError, MdpError
from vsop_rl.tabular.mdp import RANDOM_GAMMAS, TabularMdp, TabularPolicy, random_mdp


def _valid() -> tuple[np.ndarray, np.ndarray]:
    P = np.full((2, 3, 2), 0.5)
    R = np.ones((2, 3))

    return P, R


#-------------------------------------------------------------------------

@pytest.mark.parametrize("kwargs", [
    {"P": np.full((2, 3), 0.5)},
    {"P": np.full((2, 3, 3), 1.0 / 3.0)},
    {"P": np.full((2, 3, 2), 0.6)},
    {"R": -np.ones((2, 3))},
    {"R": np.ones((3, 2))},
    {"gamma": 1.5},
    {"gamma": -0.1},
    {"horizon": 0},
    {"initial": np.array([0.7, 0.7])},
    {"initial": np.ones(3) / 3.0},
    {"embedding": np.zeros(2)}
])
def test_validation(kwargs: dict) -> None:
    P, R = _valid()
    args = {"P": P, "R": R, "gamma": 0.9}
    args.update(kwargs)

    with pytest.raises(MdpError):
        TabularMdp(**args)


def test_defaults() -> None:
    P, R = _valid()
    mdp = TabularMdp(P, R, 1.0)

    assert np.array_equal(mdp.initial, [0.5, 0.5])
    assert mdp.n_states == 2 and mdp.n_actions == 3
    assert mdp.with_horizon(4).horizon == 4 and mdp.horizon is None


def test_save_and_load(tmp_path, rng: np.random.Generator) -> None:
    mdp = random_mdp(rng, 4, 2, horizon=3)
    mdp.embedding = rng.standard_normal((4, 2))
    mdp.save(tmp_path / "mdp.yml")
    loaded = TabularMdp.load(tmp_path / "mdp.yml")

    assert np.array_equal(loaded.P, mdp.P) and np.array_equal(loaded.R, mdp.R)
    assert np.array_equal(loaded.embedding, mdp.embedding)
    assert loaded.gamma == mdp.gamma and loaded.horizon == 3

    with pytest.raises(MdpError):
        TabularMdp.from_dict({"states": 2, "actions": 1, "P": [1.0]})


def test_random_mdp(rng: np.random.Generator) -> None:
    for _ in range(20):
        mdp = random_mdp(rng, 3, 2)
        assert mdp.gamma in RANDOM_GAMMAS
        assert np.all(mdp.R >= 0.0) and np.all(mdp.R <= 1.0)

    assert random_mdp(rng, 2, 2, gamma=1.0).gamma == 1.0


#-------------------------------------------------------------------------

def test_policy(rng: np.random.Generator) -> None:
    policy = TabularPolicy.random(rng, 3, 4, scale=2.0)

    assert np.allclose(policy.probs.sum(axis=1), 1.0)
    assert np.array_equal(TabularPolicy.uniform(2, 4).probs, np.full((2, 4), 0.25))
    assert np.allclose(TabularPolicy(np.array([[1000.0, 0.0]])).probs, [[1.0, 0.0]])

    with pytest.raises(DimensionError):
        TabularPolicy(np.zeros(3))
