import numpy as np

from vsop_rl.algos.base_agent import BaseAgent
from vsop_rl.algos.dpo import DPOAgent
from vsop_rl.algos.policy_gradient import a2c_agent, vsop_agent
from vsop_rl.algos.ppo import PPOAgent
from vsop_rl.algos.rmpg import RMPGAgent
from vsop_rl.config import TrainConfig
from vsop_rl.envs.base_env import EnvSpec
from vsop_rl.tabular.mdp import TabularMdp

AGENT_DICT = {
    "vsop": vsop_agent,
    "a2c": a2c_agent,
    "ppo": PPOAgent,
    "vsppo": PPOAgent,
    "dpo": DPOAgent,
    "rmpg": RMPGAgent
}


def build_agent(
    config: TrainConfig,
    spec: EnvSpec,
    rng: np.random.Generator,
    model: TabularMdp | None = None
) -> BaseAgent:

    try:
        Agent = AGENT_DICT[config.algorithm]
    except KeyError:
        raise ValueError(f"Unknown algorithm {config.algorithm}, choose from {list(AGENT_DICT)}")

    if config.algorithm == "rmpg":
        agent = Agent(spec, config, rng, model=model)
    else:
        agent = Agent(spec, config, rng)

    agent.name = config.algorithm

    return agent
