from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

from vsop_rl.exceptions import DimensionError, MdpError

RANDOM_GAMMAS = (0.5, 0.9, 0.99)
PROB_TOL = 1e-12


#-------------------------------------------------------------------------

@dataclass
class TabularMdp:

    """ Explicit finite MDP.
        P: (S, A, S) transition probabilities, R: (S, A) expected
        non-negative rewards, horizon None for the discounted
        infinite-horizon problem. embedding (S, d) optionally places
        states in a coordinate space for the Lipschitz checks. """

    P: np.ndarray
    R: np.ndarray
    gamma: float
    horizon: int | None = None
    initial: np.ndarray | None = None
    embedding: np.ndarray | None = None

    def __post_init__(self) -> None:
        self.P = np.asarray(self.P, dtype=np.float64)
        self.R = np.asarray(self.R, dtype=np.float64)

        if self.P.ndim != 3 or self.P.shape[0] != self.P.shape[2]:
            raise MdpError(f"P must have shape (S, A, S), got {self.P.shape}")
        if self.R.shape != self.P.shape[:2]:
            raise MdpError(f"R must have shape {self.P.shape[:2]}, got {self.R.shape}")
        if np.any(self.P < 0.0) or np.max(np.abs(self.P.sum(axis=2) - 1.0)) > PROB_TOL:
            raise MdpError("Each P[s, a, :] must be a probability distribution")
        if np.any(self.R < 0.0):
            raise MdpError("Rewards must be non-negative")
        if not 0.0 <= self.gamma <= 1.0:
            raise MdpError(f"gamma must be in [0, 1], got {self.gamma}")
        if self.horizon is not None and self.horizon < 1:
            raise MdpError(f"Horizon must be positive, got {self.horizon}")

        if self.initial is None:
            self.initial = np.full(self.n_states, 1.0 / self.n_states)
        else:
            self.initial = np.asarray(self.initial, dtype=np.float64)
            if self.initial.shape != (self.n_states,) or abs(self.initial.sum() - 1.0) > PROB_TOL:
                raise MdpError("Initial distribution must be a length-S probability vector")

        if self.embedding is not None:
            self.embedding = np.asarray(self.embedding, dtype=np.float64)
            if self.embedding.ndim != 2 or self.embedding.shape[0] != self.n_states:
                raise MdpError(f"Embedding must have shape (S, d), got {self.embedding.shape}")

    @property
    def n_states(self) -> int:
        return self.P.shape[0]

    @property
    def n_actions(self) -> int:
        return self.P.shape[1]

    def with_horizon(self, horizon: int | None) -> "TabularMdp":
        return TabularMdp(self.P, self.R, self.gamma, horizon, self.initial, self.embedding)

    def to_dict(self) -> dict:
        record = {
            "states": self.n_states,
            "actions": self.n_actions,
            "gamma": float(self.gamma),
            "horizon": self.horizon,
            "P": self.P.ravel().tolist(),
            "R": self.R.ravel().tolist(),
            "initial": self.initial.tolist()
        }

        if self.embedding is not None:
            record["embedding"] = self.embedding.tolist()

        return record

    @classmethod
    def from_dict(cls, record: dict) -> "TabularMdp":
        try:
            S, A = int(record["states"]), int(record["actions"])
            P = np.asarray(record["P"], dtype=np.float64).reshape(S, A, S)
            R = np.asarray(record["R"], dtype=np.float64).reshape(S, A)
            gamma = float(record["gamma"])
        except (KeyError, ValueError) as e:
            raise MdpError(f"Malformed MDP record: {e}") from e

        return cls(
            P, R, gamma,
            record.get("horizon"),
            record.get("initial"),
            record.get("embedding")
        )

    def save(self, path: str | Path) -> None:
        with open(path, "w") as fp:
            yaml.safe_dump(self.to_dict(), fp, sort_keys=False)

    @classmethod
    def load(cls, path: str | Path) -> "TabularMdp":
        with open(path, "r") as fp:
            return cls.from_dict(yaml.safe_load(fp))


#-------------------------------------------------------------------------

@dataclass
class TabularPolicy:

    """ Softmax policy over a (S, A) logit table """

    logits: np.ndarray

    def __post_init__(self) -> None:
        self.logits = np.asarray(self.logits, dtype=np.float64)

        if self.logits.ndim != 2:
            raise DimensionError(f"Logits must have shape (S, A), got {self.logits.shape}")

    @property
    def probs(self) -> np.ndarray:
        shifted = self.logits - self.logits.max(axis=1, keepdims=True)
        e = np.exp(shifted)

        return e / e.sum(axis=1, keepdims=True)

    @classmethod
    def uniform(cls, n_states: int, n_actions: int) -> "TabularPolicy":
        return cls(np.zeros((n_states, n_actions)))

    @classmethod
    def random(cls, rng: np.random.Generator, n_states: int, n_actions: int, scale: float = 1.0) -> "TabularPolicy":
        return cls(scale * rng.standard_normal((n_states, n_actions)))


#-------------------------------------------------------------------------

def random_mdp(
    rng: np.random.Generator,
    n_states: int,
    n_actions: int,
    gamma: float | None = None,
    horizon: int | None = None
) -> TabularMdp:

    """ Dirichlet(1) transition rows, U[0, 1] rewards,
        gamma drawn from RANDOM_GAMMAS unless given """

    P = rng.dirichlet(np.ones(n_states), size=(n_states, n_actions))
    R = rng.uniform(0.0, 1.0, size=(n_states, n_actions))

    if gamma is None:
        gamma = float(rng.choice(RANDOM_GAMMAS))

    return TabularMdp(P, R, gamma, horizon)
