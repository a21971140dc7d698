import numpy as np
import pytest

from vsop_rl.exceptions import PresetError
from vsop_rl.presets import list_presets, preset

# Hyperparameter tables, copied independently of vsop_rl.presets
MUJOCO_TABLE = {
    "ppo": dict(
        learning_rate=3e-4, optimizer="adam", optim_eps=1e-5, num_envs=1, num_steps=2048,
        gamma=0.99, gae_lambda=0.95, num_minibatches=32, update_epochs=10, norm_adv=True,
        clip_coef=0.2, clip_vloss=True, ent_coef=0.0, vf_coef=0.5, max_grad_norm=0.5,
        width=64, activation="tanh", dropout=0.0, weight_decay=0.0
    ),
    "vsop": dict(
        learning_rate=3e-4, optimizer="adam", optim_eps=1e-8, num_envs=1, num_steps=2048,
        gamma=0.99, gae_lambda=0.95, num_minibatches=32, update_epochs=10, norm_adv=False,
        clip_coef=None, clip_vloss=False, ent_coef=0.0, vf_coef=0.5, max_grad_norm=np.inf,
        width=256, activation="relu", dropout=0.02, weight_decay=2.4e-4,
        spectral_critic=True, thompson_sampling=True
    ),
    "a3c": dict(
        learning_rate=7e-4, optimizer="rmsprop", optim_eps=3e-6, num_envs=1, num_steps=5,
        gamma=0.99, gae_lambda=1.0, num_minibatches=1, update_epochs=1, norm_adv=False,
        ent_coef=0.0, vf_coef=0.5, max_grad_norm=0.5, width=64, activation="tanh", dropout=0.0
    )
}

CLASSIC_TABLE = {
    "ppo": dict(
        learning_rate=1e-3, num_envs=8, num_steps=8, gamma=0.99, gae_lambda=0.54,
        num_minibatches=8, update_epochs=3, max_grad_norm=3.4, clip_coef=0.2, ent_coef=0.01,
        norm_adv=True, width=64, activation="tanh"
    ),
    "vsop": dict(
        learning_rate=8.5e-4, num_envs=16, num_steps=64, gamma=0.99, gae_lambda=0.58,
        num_minibatches=16, update_epochs=8, max_grad_norm=1.9, ent_coef=0.01,
        norm_adv=False, width=64, activation="tanh", dropout=0.02
    ),
    "a3c": dict(
        learning_rate=5.5e-4, num_envs=8, num_steps=4, gamma=0.99, gae_lambda=0.13,
        num_minibatches=8, update_epochs=1, max_grad_norm=3.8, ent_coef=0.01,
        width=64, activation="tanh"
    ),
    "dpo": dict(
        learning_rate=1e-3, num_envs=4, num_steps=4, gamma=0.99, gae_lambda=1.0,
        num_minibatches=1, update_epochs=10, max_grad_norm=5.0, ent_coef=0.01,
        width=64, activation="tanh"
    )
}


#-------------------------------------------------------------------------

@pytest.mark.parametrize("table,suffix", [(MUJOCO_TABLE, "mujoco"), (CLASSIC_TABLE, "classic")])
def test_preset_fidelity(table: dict, suffix: str) -> None:
    for name, column in table.items():
        config = preset(f"{name}-{suffix}")

        for key, expected in column.items():
            assert getattr(config, key) == expected, f"{name}-{suffix}.{key}"


def test_examples() -> None:
    assert preset("ppo-classic").clip_coef == 0.2
    assert preset("vsop-mujoco").dropout == 0.02
    assert preset("a3c-classic").gae_lambda == 0.13
    assert preset("a3c-classic").algorithm == "a2c"
    assert preset("vsppo-mujoco").algorithm == "vsppo"
    assert preset("vsppo-mujoco").clip_coef == preset("ppo-mujoco").clip_coef == 0.2
    assert preset("rmpg-mujoco").rmpg_continuous_reduction


def test_environment_shortcuts() -> None:
    assert preset("vsop-cartpole").env_id == "CartPole-v1"
    assert preset("vsop-acrobot").env_id == "Acrobot-v1"

    mountaincar = preset("vsop-mountaincar")
    assert mountaincar.env_id == "MountainCarContinuous-v0"
    assert mountaincar.total_timesteps == 1_000_000
    assert mountaincar.learning_rate == 8.5e-4

    assert all(preset(name).env_id == "Pendulum-v1" for name in list_presets() if name.endswith("-mujoco"))


def test_unknown_preset() -> None:
    with pytest.raises(PresetError, match="vsop-classic"):
        preset("trpo-classic")
