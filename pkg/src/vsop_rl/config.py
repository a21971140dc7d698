from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from vsop_rl import RANDOM_SEED
from vsop_rl.exceptions import ConfigError

ALGORITHMS = ("vsop", "a2c", "ppo", "vsppo", "dpo", "rmpg")
SECTIONS = ("expt", "env", "hyperparameters", "network")


def _f(default: Any, section: str):
    return field(default=default, metadata={"section": section})


#-------------------------------------------------------------------------

@dataclass
class TrainConfig:

    """ Full hyperparameter record. Keys are unique across the four
        YAML sections so `--set key=value` needs no section prefix. """

    # expt
    algorithm: str = _f("vsop", "expt")
    seed: int = _f(RANDOM_SEED, "expt")
    total_timesteps: int = _f(500_000, "expt")
    eval_every: int = _f(10, "expt")
    eval_episodes: int = _f(10, "expt")
    verbose: bool = _f(True, "expt")
    log_scalars: bool = _f(False, "expt")
    save_model: bool = _f(True, "expt")

    # env
    env_id: str = _f("CartPole-v1", "env")
    num_envs: int = _f(16, "env")
    num_steps: int = _f(64, "env")
    norm_obs: bool = _f(True, "env")
    norm_reward: bool = _f(True, "env")

    # hyperparameters
    learning_rate: float = _f(8.5e-4, "hyperparameters")
    anneal_lr: bool = _f(True, "hyperparameters")
    optimizer: str = _f("adam", "hyperparameters")
    optim_eps: float = _f(1e-8, "hyperparameters")
    gamma: float = _f(0.99, "hyperparameters")
    gae_lambda: float = _f(0.58, "hyperparameters")
    num_minibatches: int = _f(16, "hyperparameters")
    update_epochs: int = _f(8, "hyperparameters")
    norm_adv: bool = _f(False, "hyperparameters")
    clip_coef: float | None = _f(None, "hyperparameters")
    clip_vloss: bool = _f(False, "hyperparameters")
    ent_coef: float = _f(0.01, "hyperparameters")
    vf_coef: float = _f(0.5, "hyperparameters")
    max_grad_norm: float = _f(1.9, "hyperparameters")
    dropout: float = _f(0.0, "hyperparameters")
    weight_decay: float = _f(0.0, "hyperparameters")
    derive_weight_decay: bool = _f(False, "hyperparameters")
    spectral_actor: bool = _f(False, "hyperparameters")
    spectral_critic: bool = _f(True, "hyperparameters")
    power_iterations: int = _f(1, "hyperparameters")
    thompson_sampling: bool = _f(True, "hyperparameters")
    dpo_alpha: float = _f(2.0, "hyperparameters")
    dpo_beta: float = _f(0.6, "hyperparameters")
    rmpg_continuous_reduction: bool = _f(False, "hyperparameters")

    # network
    width: int = _f(64, "network")
    depth: int = _f(2, "network")
    activation: str = _f("tanh", "network")

    @property
    def batch_size(self) -> int:
        return self.num_envs * self.num_steps

    @property
    def minibatch_size(self) -> int:
        return self.batch_size // self.num_minibatches

    @property
    def num_updates(self) -> int:
        return self.total_timesteps // self.batch_size

    def decay_coeff(self) -> float:
        """ beta = (1 - p) / (2|D|) when derived, else the configured value """

        if self.derive_weight_decay:
            return (1.0 - self.dropout) / (2.0 * self.batch_size)

        return self.weight_decay

    def validate(self) -> "TrainConfig":
        positive = ("total_timesteps", "num_envs", "num_steps", "num_minibatches",
                    "update_epochs", "width", "depth", "power_iterations", "eval_every", "eval_episodes")

        for name in positive:
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")

        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"Unknown algorithm {self.algorithm}, choose from {ALGORITHMS}")
        if self.optimizer not in ("adam", "rmsprop"):
            raise ConfigError(f"Unknown optimizer {self.optimizer}")
        if self.activation not in ("relu", "tanh"):
            raise ConfigError(f"Unknown activation {self.activation}")
        if self.batch_size % self.num_minibatches != 0:
            raise ConfigError(
                f"num_envs x num_steps = {self.batch_size} not divisible by "
                f"{self.num_minibatches} minibatches"
            )
        if self.total_timesteps < self.batch_size:
            raise ConfigError(
                f"total_timesteps {self.total_timesteps} below one batch of {self.batch_size}"
            )
        if not 0.0 <= self.dropout < 1.0:
            raise ConfigError(f"dropout must be in [0, 1), got {self.dropout}")
        if not 0.0 <= self.gamma <= 1.0 or not 0.0 <= self.gae_lambda <= 1.0:
            raise ConfigError("gamma and gae_lambda must lie in [0, 1]")
        if self.learning_rate <= 0.0 or self.optim_eps <= 0.0:
            raise ConfigError("learning_rate and optim_eps must be positive")
        if self.max_grad_norm <= 0.0:
            raise ConfigError(f"max_grad_norm must be positive (inf disables), got {self.max_grad_norm}")
        if self.weight_decay < 0.0 or self.ent_coef < 0.0 or self.vf_coef < 0.0:
            raise ConfigError("weight_decay, ent_coef and vf_coef must be non-negative")
        if self.algorithm in ("ppo", "vsppo", "dpo") and self.clip_coef is None:
            raise ConfigError(f"{self.algorithm} needs clip_coef")
        if self.clip_vloss and self.clip_coef is None:
            raise ConfigError("clip_vloss needs clip_coef")

        return self

    #-------------------------------------------------------------------------

    def to_dict(self) -> dict[str, dict[str, Any]]:
        record = {s: {} for s in SECTIONS}
        values = asdict(self)

        for f in fields(self):
            record[f.metadata["section"]][f.name] = values[f.name]

        return record

    @classmethod
    def from_dict(cls, record: dict[str, dict[str, Any]]) -> "TrainConfig":
        known = {f.name: f for f in fields(cls)}
        flat = {}

        for section, entries in record.items():
            if section not in SECTIONS:
                raise ConfigError(f"Unknown config section {section}")

            for key, value in (entries or {}).items():
                if key not in known:
                    raise ConfigError(f"Unknown config key {section}.{key}")
                if known[key].metadata["section"] != section:
                    raise ConfigError(f"Key {key} belongs in section {known[key].metadata['section']}")

                flat[key] = _coerce(known[key], value)

        return cls(**flat)

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False)

    @classmethod
    def from_yaml(cls, text: str) -> "TrainConfig":
        record = yaml.safe_load(text)

        if not isinstance(record, dict):
            raise ConfigError("Config file must hold a mapping of sections")

        return cls.from_dict(record)

    def save(self, path: str | Path) -> None:
        with open(path, "w") as fp:
            fp.write(self.to_yaml())

    @classmethod
    def load(cls, path: str | Path) -> "TrainConfig":
        with open(path, "r") as fp:
            return cls.from_yaml(fp.read())


#-------------------------------------------------------------------------

def _coerce(f, value: Any) -> Any:
    """ Normalise YAML scalars to the field's type so dumps are stable """

    kind = f.type if isinstance(f.type, str) else getattr(f.type, "__name__", str(f.type))

    try:
        if kind.startswith("float"):
            return None if value is None else float(value)
        if kind == "int":
            number = float(value)
            if isinstance(value, bool) or not number.is_integer():
                raise ValueError(f"{value} is not an integer")
            return int(number)
        if kind == "bool":
            if not isinstance(value, bool):
                raise ValueError(f"{value} is not a boolean")
            return value
        if kind == "str":
            return str(value)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Invalid value for {f.name}: {e}") from e

    return value


def apply_overrides(config: TrainConfig, overrides: list[str]) -> TrainConfig:
    """ Apply `key=value` strings; values parse as YAML scalars """

    record = config.to_dict()
    sections = {f.name: f.metadata["section"] for f in fields(TrainConfig)}

    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"Override {item} is not of the form key=value")

        key, raw = item.split("=", 1)
        key = key.strip()

        if key not in sections:
            raise ConfigError(f"Unknown config key {key}")

        value = yaml.safe_load(raw)

        if isinstance(value, str) and value.lower() in ("inf", "+inf"):
            value = np.inf

        record[sections[key]][key] = value

    return TrainConfig.from_dict(record)
