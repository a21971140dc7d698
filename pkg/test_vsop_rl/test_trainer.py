from dataclasses import replace
import json

import numpy as np
import pandas as pd
import pytest

from vsop_rl import CHECKPOINT_MAGIC, METRICS_SCHEMA
from vsop_rl.config import TrainConfig
from vsop_rl.exceptions import CheckpointError, ConfigError
from vsop_rl.presets import preset
from vsop_rl.trainer import (
    METRICS_COLUMNS,
    TrainingLoop,
    evaluate_run,
    load_checkpoint,
    read_metrics,
    run,
    save_checkpoint
)


#-------------------------------------------------------------------------

def test_single_cycle(small_config: TrainConfig, tmp_path) -> None:
    config = replace(small_config, total_timesteps=small_config.batch_size, eval_every=10)
    frame = run(config, tmp_path)

    assert len(frame) == 1
    assert frame["global_step"].iloc[0] == config.batch_size
    # the last update always evaluates
    assert np.isfinite(frame["eval_return_mean"].iloc[0])

    for name in ("metrics.csv", "config.resolved.yml", "checkpoint.bin", "results.json"):
        assert (tmp_path / name).exists()

    with open(tmp_path / "results.json") as fp:
        results = json.load(fp)
    assert results["eval_step"] == [config.batch_size]


def test_metrics_file(small_config: TrainConfig, tmp_path) -> None:
    run(small_config, tmp_path)

    with open(tmp_path / "metrics.csv") as fp:
        assert fp.readline().strip() == METRICS_SCHEMA

    metrics = read_metrics(tmp_path / "metrics.csv")
    assert list(metrics.columns) == METRICS_COLUMNS
    assert list(metrics["update"]) == [1, 2]
    assert np.all(np.diff(metrics["global_step"]) > 0)
    assert TrainConfig.load(tmp_path / "config.resolved.yml") == small_config


def test_eval_cadence(small_config: TrainConfig, tmp_path) -> None:
    config = replace(small_config, total_timesteps=5 * small_config.batch_size, eval_every=2)
    frame = run(config, tmp_path)

    evaluated = list(np.isfinite(frame["eval_return_mean"]))
    assert evaluated == [False, True, False, True, True]


def test_runs_are_deterministic(small_config: TrainConfig, tmp_path) -> None:
    first = run(small_config, tmp_path / "a")
    second = run(small_config, tmp_path / "b")

    columns = [c for c in METRICS_COLUMNS if c != "wall_time"]
    pd.testing.assert_frame_equal(first[columns], second[columns])

    a = read_metrics(tmp_path / "a" / "metrics.csv").drop(columns="wall_time")
    b = read_metrics(tmp_path / "b" / "metrics.csv").drop(columns="wall_time")
    pd.testing.assert_frame_equal(a, b)


def test_invalid_config_fails_before_work(small_config: TrainConfig, tmp_path) -> None:
    with pytest.raises(ConfigError):
        TrainingLoop(replace(small_config, num_minibatches=5), tmp_path / "run")

    assert not (tmp_path / "run").exists()


def test_read_metrics_schema(tmp_path) -> None:
    path = tmp_path / "metrics.csv"
    path.write_text("# some other schema\nglobal_step\n1\n")

    with pytest.raises(CheckpointError):
        read_metrics(path)


#-------------------------------------------------------------------------

def test_checkpoint_round_trip(tmp_path, rng: np.random.Generator) -> None:
    state = {"actor.0.weight": rng.standard_normal((3, 2)), "count": np.array(4.0), "critic.é": rng.standard_normal(5)}
    save_checkpoint(tmp_path / "ckpt.bin", state)
    loaded = load_checkpoint(tmp_path / "ckpt.bin")

    assert list(loaded) == list(state)
    assert all(np.array_equal(loaded[k], state[k]) and loaded[k].shape == state[k].shape for k in state)


def test_checkpoint_errors(tmp_path, rng: np.random.Generator) -> None:
    path = tmp_path / "ckpt.bin"
    save_checkpoint(path, {"w": rng.standard_normal(4)})
    data = path.read_bytes()

    (tmp_path / "magic.bin").write_bytes(b"NOTACKPT" + data[len(CHECKPOINT_MAGIC):])
    (tmp_path / "short.bin").write_bytes(data[:-4])
    (tmp_path / "long.bin").write_bytes(data + b"\x00")
    version = bytearray(data)
    version[len(CHECKPOINT_MAGIC)] = 9
    (tmp_path / "version.bin").write_bytes(bytes(version))

    for name in ("magic.bin", "short.bin", "long.bin", "version.bin"):
        with pytest.raises(CheckpointError):
            load_checkpoint(tmp_path / name)


def test_evaluate_saved_run(small_config: TrainConfig, tmp_path) -> None:
    loop = TrainingLoop(small_config, tmp_path)
    loop.train(verbose=False)
    expected = loop.evaluate()

    result = evaluate_run(tmp_path)
    assert result.mean == expected.mean
    assert len(evaluate_run(tmp_path, episodes=3).returns) == 3


#-------------------------------------------------------------------------

@pytest.mark.slow
@pytest.mark.parametrize("name,target", [("vsop-cartpole", 475.0), ("ppo-cartpole", 475.0), ("vsop-acrobot", -100.0)])
def test_desk_scale_runs(name: str, target: float, tmp_path) -> None:
    successes = 0

    for seed in range(5):
        config = replace(preset(name), seed=seed, verbose=False, save_model=False)
        frame = run(config, tmp_path / f"seed_{seed}")
        successes += int(frame["eval_return_mean"].max() >= target)

    assert successes >= 3


@pytest.mark.slow
def test_desk_scale_mountaincar(tmp_path) -> None:
    successes = 0

    for seed in range(5):
        config = replace(preset("vsop-mountaincar"), seed=seed, verbose=False, save_model=False)
        frame = run(config, tmp_path / f"seed_{seed}")
        successes += int(frame["eval_return_mean"].max() > 0.0)

    assert successes >= 3
