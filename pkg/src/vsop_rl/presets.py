""" Published hyperparameter tables as TrainConfig presets.
    "-mujoco" presets carry the Gymnasium-MuJoCo column values and
    run on Pendulum-v1; "-classic" presets carry the Classic Control
    column values. """

from dataclasses import replace

import numpy as np

from vsop_rl.config import TrainConfig
from vsop_rl.exceptions import PresetError

#-------------------------------------------------------------------------
# Gymnasium-MuJoCo column values (shared rows first)

_MUJOCO_SHARED = dict(
    env_id="Pendulum-v1",
    total_timesteps=3_000_000,
    num_envs=1,
    anneal_lr=True,
    gamma=0.99,
    ent_coef=0.0,
    vf_coef=0.5,
    norm_obs=True,
    norm_reward=True
)

_MUJOCO_VSOP_FAMILY = dict(
    num_steps=2048,
    learning_rate=3e-4,
    optimizer="adam",
    optim_eps=1e-8,
    gae_lambda=0.95,
    num_minibatches=32,
    update_epochs=10,
    norm_adv=False,
    clip_coef=None,
    clip_vloss=False,
    max_grad_norm=np.inf,
    width=256,
    activation="relu",
    weight_decay=2.4e-4,
    dropout=0.02,
    spectral_critic=True,
    thompson_sampling=True
)

_MUJOCO = {
    "vsop": dict(_MUJOCO_VSOP_FAMILY, algorithm="vsop"),
    # clip is blank in the published table; the PPO surrogate needs one, PPO column value
    "vsppo": dict(_MUJOCO_VSOP_FAMILY, algorithm="vsppo", clip_coef=0.2),
    "rmpg": dict(_MUJOCO_VSOP_FAMILY, algorithm="rmpg", rmpg_continuous_reduction=True),
    "a3c": dict(
        algorithm="a2c", num_steps=5, learning_rate=7e-4, optimizer="rmsprop", optim_eps=3e-6,
        gae_lambda=1.0, num_minibatches=1, update_epochs=1, norm_adv=False, clip_coef=None,
        clip_vloss=False, max_grad_norm=0.5, width=64, activation="tanh", weight_decay=0.0,
        dropout=0.0, spectral_critic=False, thompson_sampling=False
    ),
    "ppo": dict(
        algorithm="ppo", num_steps=2048, learning_rate=3e-4, optimizer="adam", optim_eps=1e-5,
        gae_lambda=0.95, num_minibatches=32, update_epochs=10, norm_adv=True, clip_coef=0.2,
        clip_vloss=True, max_grad_norm=0.5, width=64, activation="tanh", weight_decay=0.0,
        dropout=0.0, spectral_critic=False, thompson_sampling=False
    )
}

#-------------------------------------------------------------------------
# Classic Control column values

_CLASSIC_SHARED = dict(
    env_id="CartPole-v1",
    total_timesteps=500_000,
    gamma=0.99,
    ent_coef=0.01,
    width=64,
    activation="tanh"
)

_CLASSIC = {
    "ppo": dict(
        algorithm="ppo", learning_rate=1e-3, num_envs=8, num_steps=8, gae_lambda=0.54,
        num_minibatches=8, update_epochs=3, max_grad_norm=3.4, clip_coef=0.2, norm_adv=True,
        clip_vloss=True, dropout=0.0, spectral_critic=False, thompson_sampling=False
    ),
    "vsop": dict(
        algorithm="vsop", learning_rate=8.5e-4, num_envs=16, num_steps=64, gae_lambda=0.58,
        num_minibatches=16, update_epochs=8, max_grad_norm=1.9, clip_coef=None, norm_adv=False,
        clip_vloss=False, dropout=0.02, derive_weight_decay=True, spectral_critic=True,
        thompson_sampling=True
    ),
    "a3c": dict(
        algorithm="a2c", learning_rate=5.5e-4, num_envs=8, num_steps=4, gae_lambda=0.13,
        num_minibatches=8, update_epochs=1, max_grad_norm=3.8, clip_coef=None, norm_adv=False,
        clip_vloss=False, optimizer="rmsprop", optim_eps=3e-6, dropout=0.0,
        spectral_critic=False, thompson_sampling=False
    ),
    "dpo": dict(
        algorithm="dpo", learning_rate=1e-3, num_envs=4, num_steps=4, gae_lambda=1.0,
        num_minibatches=1, update_epochs=10, max_grad_norm=5.0, clip_coef=0.2, norm_adv=True,
        clip_vloss=True, dropout=0.0, spectral_critic=False, thompson_sampling=False
    )
}

#-------------------------------------------------------------------------
# Environment-bound desk-scale shortcuts on the classic-control values

_SHORTCUTS = {
    "vsop-cartpole": ("vsop", dict(env_id="CartPole-v1", total_timesteps=500_000)),
    "ppo-cartpole": ("ppo", dict(env_id="CartPole-v1", total_timesteps=500_000)),
    "vsop-acrobot": ("vsop", dict(env_id="Acrobot-v1", total_timesteps=500_000)),
    "vsop-mountaincar": ("vsop", dict(env_id="MountainCarContinuous-v0", total_timesteps=1_000_000))
}


def _build(shared: dict, column: dict) -> TrainConfig:
    return replace(TrainConfig(), **{**shared, **column})


def _table() -> dict[str, dict]:
    presets = {}

    for name, column in _MUJOCO.items():
        presets[f"{name}-mujoco"] = (_MUJOCO_SHARED, column)
    for name, column in _CLASSIC.items():
        presets[f"{name}-classic"] = (_CLASSIC_SHARED, column)
    for name, (base, override) in _SHORTCUTS.items():
        presets[name] = (_CLASSIC_SHARED, dict(_CLASSIC[base], **override))

    return presets


PRESETS = _table()


def list_presets() -> list[str]:
    return sorted(PRESETS)


def preset(name: str) -> TrainConfig:
    try:
        shared, column = PRESETS[name]
    except KeyError:
        raise PresetError(f"Unknown preset {name}, choose from {list_presets()}")

    return _build(shared, column).validate()
