from functools import partial

from vsop_rl.envs.base_env import BaseEnv
from vsop_rl.envs.classic_control import Acrobot, CartPole, MountainCarContinuous, Pendulum
from vsop_rl.envs.tabular_env import TabularEnv
from vsop_rl.envs.vector_env import SyncVectorEnv

ENV_DICT = {
    "CartPole-v1": CartPole,
    "Acrobot-v1": Acrobot,
    "Pendulum-v1": Pendulum,
    "MountainCarContinuous-v0": MountainCarContinuous
}

TABULAR_PREFIX = "Tabular:"


def make_env(env_id: str) -> BaseEnv:
    if env_id.startswith(TABULAR_PREFIX):
        return TabularEnv.from_file(env_id[len(TABULAR_PREFIX):])

    try:
        return ENV_DICT[env_id]()
    except KeyError:
        raise ValueError(
            f"Unknown environment {env_id}, choose from {list(ENV_DICT)} or {TABULAR_PREFIX}<file>"
        )


def make_vec(env_id: str, n: int, seed: int) -> SyncVectorEnv:
    if n < 1:
        raise ValueError(f"Number of environments must be positive, got {n}")

    return SyncVectorEnv([partial(make_env, env_id) for _ in range(n)], seed)
