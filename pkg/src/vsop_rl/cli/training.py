from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

from vsop_rl.config import TrainConfig, apply_overrides
from vsop_rl.exceptions import ConfigError
from vsop_rl.presets import preset
from vsop_rl.trainer import TrainingLoop


#-------------------------------------------------------------------------

def resolve_config(
    config_path: str | None = None,
    preset_name: str | None = None,
    overrides: list[str] | None = None,
    seed: int | None = None
) -> TrainConfig:

    """ Preset or YAML file (or defaults), then --set overrides, then seed """

    if config_path is not None and preset_name is not None:
        raise ConfigError("Give either a config file or a preset, not both")

    if config_path is not None:
        config = TrainConfig.load(config_path)
    elif preset_name is not None:
        config = preset(preset_name)
    else:
        config = TrainConfig()

    config = apply_overrides(config, overrides or [])

    if seed is not None:
        config = replace(config, seed=seed)

    return config.validate()


def train(config: TrainConfig, out_dir: str | Path, verbose: bool | None = None) -> None:
    training_loop = TrainingLoop(config, out_dir)
    training_loop.train(verbose)


def _train_seed(job: tuple[TrainConfig, str]) -> str:
    config, out_dir = job
    train(config, out_dir, verbose=False)

    return out_dir


#-------------------------------------------------------------------------

def sweep(
    config: TrainConfig,
    out_dir: str | Path,
    num_seeds: int,
    first_seed: int = 0,
    workers: int | None = None
) -> list[str]:

    """ One independent process per seed, written to out_dir/seed_<n> """

    if num_seeds < 1:
        raise ConfigError(f"Need at least one seed, got {num_seeds}")

    jobs = [
        (replace(config, seed=seed), str(Path(out_dir) / f"seed_{seed}"))
        for seed in range(first_seed, first_seed + num_seeds)
    ]

    with ProcessPoolExecutor(max_workers=workers) as executor:
        finished = []

        for run_dir in executor.map(_train_seed, jobs):
            finished.append(run_dir)

            if config.verbose:
                print(f"Finished {run_dir}")

    return finished
