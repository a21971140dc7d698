from dataclasses import dataclass, field
import warnings

import numpy as np

from vsop_rl.exceptions import DimensionError, SpectralUnderflowWarning

ACTIVATIONS = ("relu", "tanh", "identity")
SIGMA_FLOOR = 1e-12


#-------------------------------------------------------------------------
""" Orthogonal initialisation via QR of a Gaussian matrix,
    sign-corrected so the factor is uniformly distributed """

def orthogonal_init(
    out_dim: int,
    in_dim: int,
    gain: float,
    rng: np.random.Generator
) -> np.ndarray:

    if out_dim < 1 or in_dim < 1:
        raise DimensionError(f"Orthogonal init needs positive dims, got ({out_dim}, {in_dim})")
    if gain <= 0.0:
        raise ValueError(f"Gain must be positive, got {gain}")

    rows, cols = max(out_dim, in_dim), min(out_dim, in_dim)
    a = rng.standard_normal((rows, cols))
    q, r = np.linalg.qr(a)
    q *= np.where(np.diag(r) < 0.0, -1.0, 1.0)

    # Tall: orthonormal columns (W^T W = I), wide: orthonormal rows (W W^T = I)
    if out_dim < in_dim:
        q = q.T

    return gain * q


#-------------------------------------------------------------------------

def _l2_normalise(x: np.ndarray) -> np.ndarray:
    return x / max(float(np.linalg.norm(x)), SIGMA_FLOOR)


@dataclass
class DenseLayer:

    """ Affine layer y = act(W_eff x + b).
        With spectral=True, W_eff = W / sigma where sigma = ||W^T u||
        and u is the persisted power-iteration vector. W itself stays
        un-normalised in the parameter store. """

    weight: np.ndarray
    bias: np.ndarray
    activation: str = "identity"
    spectral: bool = False
    u: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        self.weight = np.asarray(self.weight, dtype=np.float64)
        self.bias = np.asarray(self.bias, dtype=np.float64)

        if self.weight.ndim != 2:
            raise DimensionError(f"Weight must be 2-D, got shape {self.weight.shape}")
        if self.bias.shape != (self.weight.shape[0],):
            raise DimensionError(
                f"Bias length {self.bias.shape} does not match weight rows {self.weight.shape[0]}"
            )
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"Activation must be one of {ACTIVATIONS}, got {self.activation}")

        if self.spectral and self.u is None:
            # Deterministic start; power iteration moves it towards the top singular vector
            self.u = _l2_normalise(np.ones(self.out_dim))
        if self.u is not None:
            self.u = _l2_normalise(np.asarray(self.u, dtype=np.float64))

    @classmethod
    def initialise(
        cls,
        in_dim: int,
        out_dim: int,
        activation: str,
        gain: float,
        rng: np.random.Generator,
        spectral: bool = False
    ) -> "DenseLayer":
        weight = orthogonal_init(out_dim, in_dim, gain, rng)
        u = _l2_normalise(rng.standard_normal(out_dim)) if spectral else None

        return cls(weight, np.zeros(out_dim), activation, spectral, u)

    @property
    def in_dim(self) -> int:
        return self.weight.shape[1]

    @property
    def out_dim(self) -> int:
        return self.weight.shape[0]

    def sigma(self) -> float:
        """ Current spectral estimate ||W^T u|| (1.0 when not spectral) """

        if not self.spectral:
            return 1.0

        sigma = float(np.linalg.norm(self.weight.T @ self.u))

        if sigma < SIGMA_FLOOR:
            warnings.warn(
                f"Spectral norm {sigma:.3e} below floor, clamping to {SIGMA_FLOOR}",
                SpectralUnderflowWarning
            )
            sigma = SIGMA_FLOOR

        return sigma

    def effective_weight(self) -> np.ndarray:
        if not self.spectral:
            return self.weight

        return self.weight / self.sigma()

    def power_iteration(self, iterations: int = 1) -> None:
        if not self.spectral:
            return

        for _ in range(iterations):
            v = _l2_normalise(self.weight.T @ self.u)
            self.u = _l2_normalise(self.weight @ v)

    def copy(self) -> "DenseLayer":
        return DenseLayer(
            self.weight.copy(),
            self.bias.copy(),
            self.activation,
            self.spectral,
            None if self.u is None else self.u.copy()
        )


#-------------------------------------------------------------------------

def spectral_normalize(layer: DenseLayer, iterations: int) -> np.ndarray:
    """ Run power iteration (v <- norm(W^T u), u <- norm(W v)),
        persist u on the layer and return W / sigma """

    if iterations < 1:
        raise ValueError(f"Need at least one power iteration, got {iterations}")
    if not layer.spectral:
        raise ValueError("Layer does not carry spectral state")

    layer.power_iteration(iterations)

    return layer.effective_weight()


#-------------------------------------------------------------------------

def activate(pre: np.ndarray, activation: str) -> np.ndarray:
    if activation == "relu":
        return np.maximum(pre, 0.0)
    elif activation == "tanh":
        return np.tanh(pre)
    else:
        return pre


def activation_grad(pre: np.ndarray, post: np.ndarray, activation: str) -> np.ndarray:
    if activation == "relu":
        return (pre > 0.0).astype(np.float64)
    elif activation == "tanh":
        return 1.0 - post ** 2
    else:
        return np.ones_like(pre)
