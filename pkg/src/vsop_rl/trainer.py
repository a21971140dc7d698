import datetime
import json
from pathlib import Path
import struct
import time

import numpy as np
import pandas as pd

from vsop_rl import CHECKPOINT_MAGIC, CHECKPOINT_VERSION, METRICS_SCHEMA
from vsop_rl.algos.build_agent import build_agent
from vsop_rl.algos.evaluation import EvalResult, evaluate
from vsop_rl.config import TrainConfig
from vsop_rl.envs.build_env import make_env, make_vec
from vsop_rl.exceptions import CheckpointError
from vsop_rl.rollout.buffer import RolloutBuffer
from vsop_rl.rollout.collector import RolloutCollector
from vsop_rl.rollout.normalisation import RunningMoments, normalize_obs
from vsop_rl.utils.optimisers import LrSchedule

np.set_printoptions(precision=4, suppress=True)

METRICS_COLUMNS = [
    "global_step", "update", "episodes", "episodic_return_mean", "episodic_return_std",
    "eval_return_mean", "eval_return_std", "actor_loss", "critic_loss", "entropy",
    "clip_fraction", "actor_grad_norm", "critic_grad_norm", "pg_grad_norm", "approx_kl",
    "explained_variance", "learning_rate", "wall_time"
]

AGENT_STREAM = 1
EVAL_STREAM = 2


#-------------------------------------------------------------------------
""" Checkpoint format: magic, uint32 version, uint32 count, then per
    array uint32 name length, utf-8 name, uint32 ndim, uint32 shape,
    little-endian float64 data """

def save_checkpoint(path: str | Path, state: dict[str, np.ndarray]) -> None:
    with open(path, "wb") as fp:
        fp.write(CHECKPOINT_MAGIC)
        fp.write(struct.pack("<II", CHECKPOINT_VERSION, len(state)))

        for name, array in state.items():
            array = np.asarray(array, dtype="<f8")
            encoded = name.encode("utf-8")
            fp.write(struct.pack("<I", len(encoded)))
            fp.write(encoded)
            fp.write(struct.pack(f"<I{array.ndim}I", array.ndim, *array.shape))
            fp.write(array.tobytes(order="C"))


def load_checkpoint(path: str | Path) -> dict[str, np.ndarray]:
    with open(path, "rb") as fp:
        data = fp.read()

    if not data.startswith(CHECKPOINT_MAGIC):
        raise CheckpointError(f"{path} is not a checkpoint file")

    offset = len(CHECKPOINT_MAGIC)

    try:
        version, count = struct.unpack_from("<II", data, offset)
        offset += 8

        if version != CHECKPOINT_VERSION:
            raise CheckpointError(f"Checkpoint version {version}, expected {CHECKPOINT_VERSION}")

        state = {}

        for _ in range(count):
            (length,) = struct.unpack_from("<I", data, offset)
            offset += 4
            name = data[offset:offset + length].decode("utf-8")
            offset += length
            (ndim,) = struct.unpack_from("<I", data, offset)
            offset += 4
            shape = struct.unpack_from(f"<{ndim}I", data, offset)
            offset += 4 * ndim
            size = int(np.prod(shape))
            state[name] = np.frombuffer(data, dtype="<f8", count=size, offset=offset).reshape(shape).copy()
            offset += 8 * size

    except (struct.error, ValueError) as e:
        raise CheckpointError(f"Truncated checkpoint {path}: {e}") from e

    if offset != len(data):
        raise CheckpointError(f"Trailing bytes in checkpoint {path}")

    return state


#-------------------------------------------------------------------------

class TrainingLoop:

    """ Collect -> update cycles until total_timesteps, with periodic
        deterministic evaluation. Writes metrics.csv incrementally,
        config.resolved.yml and checkpoint.bin under out_dir. """

    def __init__(self, config: TrainConfig, out_dir: str | Path):
        self.config = config.validate()
        self.out_dir = Path(out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.metrics_path = self.out_dir / "metrics.csv"
        self.log_save_path = self.out_dir / "logs"

        self.envs = make_vec(config.env_id, config.num_envs, config.seed)
        self.eval_env = make_env(config.env_id)
        spec = self.envs.spec
        model = getattr(self.envs.envs[0], "model", None)

        rng = np.random.default_rng(np.random.SeedSequence([config.seed, AGENT_STREAM]))
        self.agent = build_agent(config, spec, rng, model)

        self.collector = RolloutCollector(self.envs, config.gamma, config.norm_obs, config.norm_reward)
        action_shape = () if spec.action_space.discrete else (spec.action_space.dim,)
        self.buffer = RolloutBuffer(config.num_steps, config.num_envs, spec.obs_dim, action_shape)
        self.schedule = LrSchedule(config.learning_rate, config.num_updates, config.anneal_lr)

        if hasattr(self.agent, "attach_normalisers"):
            self.agent.attach_normalisers(self.collector.normalise, self.collector.scale_reward)

        self.writer = None

        if config.log_scalars:
            import tensorflow as tf

            log_time = datetime.datetime.now().strftime("%Y%m%d-%H%M%S")
            self.writer = tf.summary.create_file_writer(str(self.log_save_path / log_time / "train"))

    def evaluate(self) -> EvalResult:
        rng = np.random.default_rng(np.random.SeedSequence([self.config.seed, EVAL_STREAM]))

        return evaluate(
            self.agent, self.eval_env, self.config.eval_episodes, rng, self.collector.normalise
        )

    def _log_scalars(self, row: dict, step: int) -> None:
        import tensorflow as tf

        with self.writer.as_default():
            for key, value in row.items():
                if key not in ("global_step", "update", "wall_time") and np.isfinite(value):
                    tf.summary.scalar(key, value, step=step)

    def _append_row(self, row: dict, first: bool) -> None:
        frame = pd.DataFrame([row], columns=METRICS_COLUMNS)

        if first:
            with open(self.metrics_path, "w") as fp:
                fp.write(f"{METRICS_SCHEMA}\n")

        frame.to_csv(self.metrics_path, mode="a", header=first, index=False)

    def state_dict(self) -> dict[str, np.ndarray]:
        state = self.agent.state_dict()

        if self.collector.obs_moments is not None:
            state.update({f"obs_rms.{k}": v for k, v in self.collector.obs_moments.state_dict().items()})

        scaler = self.collector.reward_scaler.moments
        state.update({f"return_rms.{k}": v for k, v in scaler.state_dict().items()})

        return state

    def train(self, verbose: bool | None = None) -> pd.DataFrame:

        """ Main training loop """

        cfg = self.config
        verbose = cfg.verbose if verbose is None else verbose
        self.config.save(self.out_dir / "config.resolved.yml")

        self.results = {"eval_return_mean": [], "eval_step": [], "time": 0}
        rows = []
        start_time = time.time()

        for update in range(cfg.num_updates):
            lr = self.schedule(update)
            episodes = self.collector.collect(self.agent, self.buffer, cfg.thompson_sampling)
            report = self.agent.update(self.buffer, lr)

            returns = [ret for _, _, ret, _ in episodes]
            row = {
                "global_step": self.collector.global_step,
                "update": update + 1,
                "episodes": len(returns),
                "episodic_return_mean": float(np.mean(returns)) if returns else np.nan,
                "episodic_return_std": float(np.std(returns)) if returns else np.nan,
                "eval_return_mean": np.nan,
                "eval_return_std": np.nan,
                "learning_rate": lr
            }
            row.update({k: v for k, v in report.to_dict().items() if k in METRICS_COLUMNS})

            if (update + 1) % cfg.eval_every == 0 or update + 1 == cfg.num_updates:
                result = self.evaluate()
                row["eval_return_mean"] = result.mean
                row["eval_return_std"] = result.std
                self.results["eval_return_mean"].append(result.mean)
                self.results["eval_step"].append(row["global_step"])

            row["wall_time"] = time.time() - start_time
            self._append_row(row, first=update == 0)
            rows.append(row)

            if self.writer is not None:
                self._log_scalars(row, row["global_step"])

            if verbose:
                print(
                    f"Update {update + 1}/{cfg.num_updates}, step {row['global_step']}, "
                    f"return {row['episodic_return_mean']:.2f}, eval {row['eval_return_mean']:.2f}, "
                    f"actor/critic loss {report.actor_loss:.4f}/{report.critic_loss:.4f}"
                )

        if cfg.save_model:
            save_checkpoint(self.out_dir / "checkpoint.bin", self.state_dict())

        self.results["time"] = (time.time() - start_time) / 3600

        if verbose:
            print(f"Time taken: {self.results['time']}")

        json.dump(self.results, open(self.out_dir / "results.json", "w"), indent=4)

        return pd.DataFrame(rows, columns=METRICS_COLUMNS)


#-------------------------------------------------------------------------

def run(config: TrainConfig, out_dir: str | Path, verbose: bool | None = None) -> pd.DataFrame:
    return TrainingLoop(config, out_dir).train(verbose)


def read_metrics(path: str | Path) -> pd.DataFrame:
    with open(path, "r") as fp:
        schema = fp.readline().strip()

    if schema != METRICS_SCHEMA:
        raise CheckpointError(f"{path} has schema '{schema}', expected '{METRICS_SCHEMA}'")

    return pd.read_csv(path, comment="#")


def evaluate_run(run_dir: str | Path, episodes: int | None = None, seed: int | None = None) -> EvalResult:
    """ Rebuild the agent of a finished run from its checkpoint and
        evaluate it with the saved normalisation statistics """

    run_dir = Path(run_dir)
    config = TrainConfig.load(run_dir / "config.resolved.yml")
    state = load_checkpoint(run_dir / "checkpoint.bin")

    env = make_env(config.env_id)
    agent = build_agent(
        config, env.spec, np.random.default_rng(config.seed), getattr(env, "model", None)
    )
    agent.load_state_dict(state)

    obs_transform = None

    if "obs_rms.mean" in state:
        moments = RunningMoments((env.spec.obs_dim,))
        moments.load_state_dict({k[len("obs_rms."):]: v for k, v in state.items() if k.startswith("obs_rms.")})

        def obs_transform(x: np.ndarray) -> np.ndarray:
            return normalize_obs(moments, x, update=False)

    seed = config.seed if seed is None else seed
    rng = np.random.default_rng(np.random.SeedSequence([seed, EVAL_STREAM]))

    return evaluate(agent, env, episodes or config.eval_episodes, rng, obs_transform)
