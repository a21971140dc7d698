from dataclasses import replace

import numpy as np
import pytest

from vsop_rl import RANDOM_SEED
from vsop_rl.config import TrainConfig


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(RANDOM_SEED)


@pytest.fixture
def small_config() -> TrainConfig:
    """ CartPole config with one cheap update per 32 steps """

    return replace(
        TrainConfig(),
        total_timesteps=64,
        num_envs=2,
        num_steps=16,
        num_minibatches=2,
        update_epochs=2,
        width=8,
        eval_every=1,
        eval_episodes=1,
        verbose=False,
        save_model=True
    ).validate()
