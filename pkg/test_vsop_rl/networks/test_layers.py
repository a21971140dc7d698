import numpy as np
import pytest

from vsop_rl import RANDOM_SEED
from vsop_rl.exceptions import DimensionError, SpectralUnderflowWarning
from vsop_rl.networks.layers import DenseLayer, activate, activation_grad, orthogonal_init, spectral_normalize

NUM_SPECTRAL_MATRICES = 50
SPECTRAL_TOL = 1e-3


#-------------------------------------------------------------------------

@pytest.mark.parametrize(
    "out_dim,in_dim,gain",
    [(3, 5, 1.0), (5, 3, 1.0), (4, 4, np.sqrt(2.0)), (1, 7, 0.01)]
)
def test_orthogonal_init(out_dim: int, in_dim: int, gain: float, rng: np.random.Generator) -> None:
    W = orthogonal_init(out_dim, in_dim, gain, rng)
    assert W.shape == (out_dim, in_dim)

    if out_dim <= in_dim:
        gram = W @ W.T
    else:
        gram = W.T @ W

    assert np.allclose(gram, gain ** 2 * np.eye(min(out_dim, in_dim)), atol=1e-10)


def test_orthogonal_init_errors(rng: np.random.Generator) -> None:
    with pytest.raises(DimensionError):
        orthogonal_init(0, 3, 1.0, rng)

    with pytest.raises(ValueError):
        orthogonal_init(3, 3, 0.0, rng)


#-------------------------------------------------------------------------

def _gapped_matrix(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    """ Random orthogonal factors around singular values with s2 <= 0.8 s1 """

    k = min(rows, cols)
    U = orthogonal_init(rows, k, 1.0, rng)
    V = orthogonal_init(cols, k, 1.0, rng)
    s = np.sort(rng.uniform(0.0, 0.8, size=k))[::-1]
    s[0] = 1.0

    return rng.uniform(0.1, 10.0) * (U * s) @ V.T


def test_spectral_normalize(subtests, rng: np.random.Generator) -> None:
    for i in range(NUM_SPECTRAL_MATRICES):
        rows, cols = (int(d) for d in rng.integers(1, 65, size=2))

        with subtests.test(i=i, rows=rows, cols=cols):
            W = _gapped_matrix(rng, rows, cols)
            layer = DenseLayer(W, np.zeros(rows), "identity", spectral=True, u=rng.standard_normal(rows))
            W_eff = spectral_normalize(layer, 50)
            top = np.linalg.svd(W_eff, compute_uv=False)[0]

            assert abs(top - 1.0) < SPECTRAL_TOL
            assert np.array_equal(layer.weight, W)


def test_spectral_normalize_gaussian(rng: np.random.Generator) -> None:
    """ Unstructured Gaussian matrices need more rounds to converge """

    for _ in range(5):
        W = rng.standard_normal((16, 12))
        layer = DenseLayer(W, np.zeros(16), spectral=True)
        W_eff = spectral_normalize(layer, 1000)

        assert abs(np.linalg.svd(W_eff, compute_uv=False)[0] - 1.0) < SPECTRAL_TOL


def test_spectral_normalize_errors() -> None:
    layer = DenseLayer(np.eye(3), np.zeros(3), spectral=True)

    with pytest.raises(ValueError):
        spectral_normalize(layer, 0)

    with pytest.raises(ValueError):
        spectral_normalize(DenseLayer(np.eye(3), np.zeros(3)), 1)


def test_spectral_underflow_warns() -> None:
    layer = DenseLayer(np.zeros((2, 3)), np.zeros(2), spectral=True)

    with pytest.warns(SpectralUnderflowWarning):
        assert layer.sigma() > 0.0


def test_dense_layer_validation() -> None:
    with pytest.raises(DimensionError):
        DenseLayer(np.zeros((2, 3)), np.zeros(3))

    with pytest.raises(ValueError):
        DenseLayer(np.zeros((2, 3)), np.zeros(2), "sigmoid")


#-------------------------------------------------------------------------

@pytest.mark.parametrize("activation", ["relu", "tanh", "identity"])
def test_activation_grad(activation: str) -> None:
    rng = np.random.default_rng(RANDOM_SEED)
    pre = rng.standard_normal(100)
    pre = pre[np.abs(pre) > 1e-3]
    eps = 1e-6

    numeric = (activate(pre + eps, activation) - activate(pre - eps, activation)) / (2 * eps)
    analytic = activation_grad(pre, activate(pre, activation), activation)

    assert np.allclose(analytic, numeric, atol=1e-8)
