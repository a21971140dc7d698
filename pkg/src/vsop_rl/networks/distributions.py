from dataclasses import dataclass

import numpy as np

from vsop_rl.exceptions import DimensionError, InvalidActionError

LOG_2PI = np.log(2.0 * np.pi)


#-------------------------------------------------------------------------

@dataclass
class DiagGaussian:

    """ Diagonal Gaussian with state-independent log_std.
        mean is (m,) or (batch, m); log_std is (m,) and broadcast. """

    mean: np.ndarray
    log_std: np.ndarray

    def __post_init__(self) -> None:
        self.mean = np.asarray(self.mean, dtype=np.float64)
        self.log_std = np.asarray(self.log_std, dtype=np.float64)

        if self.log_std.shape != self.mean.shape[-1:]:
            raise DimensionError(
                f"log_std shape {self.log_std.shape} does not match action dim {self.mean.shape[-1]}"
            )

    @property
    def std(self) -> np.ndarray:
        return np.exp(self.log_std)

    def _check(self, action: np.ndarray) -> np.ndarray:
        action = np.asarray(action, dtype=np.float64)

        if action.shape[-1:] != self.mean.shape[-1:]:
            raise DimensionError(f"Action shape {action.shape} does not match {self.mean.shape}")

        return action

    def log_prob(self, action: np.ndarray) -> np.ndarray | float:
        action = self._check(action)
        z = (action - self.mean) / self.std

        return -0.5 * np.sum(z ** 2 + 2.0 * self.log_std + LOG_2PI, axis=-1)

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        return self.mean + self.std * rng.standard_normal(self.mean.shape)

    def mode(self) -> np.ndarray:
        return self.mean.copy()

    def entropy(self) -> np.ndarray | float:
        ent = np.sum(self.log_std + 0.5 * (LOG_2PI + 1.0))

        if self.mean.ndim == 2:
            return np.full(self.mean.shape[0], ent)

        return ent

    def log_prob_grad(self, action: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """ (d/d mean, d/d log_std), both shaped like the action """

        action = self._check(action)
        diff = action - self.mean
        var = self.std ** 2

        return diff / var, diff ** 2 / var - 1.0

    def entropy_grad(self) -> tuple[np.ndarray, np.ndarray]:
        return np.zeros_like(self.mean), np.ones_like(self.mean)


#-------------------------------------------------------------------------

def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - np.max(logits, axis=-1, keepdims=True)
    e = np.exp(shifted)

    return e / np.sum(e, axis=-1, keepdims=True)


def log_softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - np.max(logits, axis=-1, keepdims=True)

    return shifted - np.log(np.sum(np.exp(shifted), axis=-1, keepdims=True))


@dataclass
class Categorical:

    logits: np.ndarray

    def __post_init__(self) -> None:
        self.logits = np.asarray(self.logits, dtype=np.float64)

    @property
    def n(self) -> int:
        return self.logits.shape[-1]

    @property
    def probs(self) -> np.ndarray:
        return softmax(self.logits)

    def _check(self, action: np.ndarray) -> np.ndarray:
        action = np.asarray(action)
        index = action.astype(np.int64)

        if np.any(index != action) or np.any(index < 0) or np.any(index >= self.n):
            raise InvalidActionError(f"Action {action} outside [0, {self.n})")
        if index.shape != self.logits.shape[:-1]:
            raise DimensionError(f"Action shape {index.shape} does not match {self.logits.shape[:-1]}")

        return index

    def log_prob(self, action: np.ndarray) -> np.ndarray | float:
        index = self._check(action)
        log_p = log_softmax(self.logits)

        return np.take_along_axis(log_p, index[..., None], axis=-1)[..., 0]

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        """ Inverse CDF over the stabilised softmax """

        cdf = np.cumsum(self.probs, axis=-1)
        u = rng.random(self.logits.shape[:-1] + (1,))
        index = np.sum(cdf < u * cdf[..., -1:], axis=-1)

        return np.minimum(index, self.n - 1)

    def mode(self) -> np.ndarray:
        return np.argmax(self.logits, axis=-1)

    def entropy(self) -> np.ndarray | float:
        p = self.probs

        return -np.sum(p * log_softmax(self.logits), axis=-1)

    def log_prob_grad(self, action: np.ndarray) -> np.ndarray:
        index = self._check(action)
        onehot = np.zeros_like(self.logits)
        np.put_along_axis(onehot, index[..., None], 1.0, axis=-1)

        return onehot - self.probs

    def entropy_grad(self) -> np.ndarray:
        p = self.probs
        log_p = log_softmax(self.logits)
        ent = -np.sum(p * log_p, axis=-1, keepdims=True)

        return -p * (log_p + ent)
