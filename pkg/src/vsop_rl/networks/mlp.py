from dataclasses import dataclass, field
import itertools

import numpy as np

from vsop_rl.exceptions import CacheError, DimensionError
from vsop_rl.networks.layers import DenseLayer, activate, activation_grad

_NET_IDS = itertools.count()


#-------------------------------------------------------------------------

@dataclass
class DropoutMask:

    """ Per-hidden-layer multiplicative masks, entries in {0, 1/(1-p)}.
        Each mask is either (units,) and shared by every row, or
        (batch, units) with one draw per row. """

    masks: list[np.ndarray]
    rate: float
    provenance: dict = field(default_factory=dict, repr=False)


@dataclass
class ForwardCache:
    inputs: list[np.ndarray]
    pre_activations: list[np.ndarray]
    activations: list[np.ndarray]
    sigmas: list[float]
    mask: DropoutMask | None
    net_id: int
    version: int
    batched: bool


#-------------------------------------------------------------------------

class Mlp:

    """ Dense feed-forward network, final layer always identity.
        Parameters are exposed as a flat name -> array mapping
        ("0.weight", "0.bias", ...) for the optimisers. """

    def __init__(self, layers: list[DenseLayer], dropout_rate: float = 0.0):
        if len(layers) == 0:
            raise DimensionError("Mlp needs at least one layer")
        if not 0.0 <= dropout_rate < 1.0:
            raise ValueError(f"Dropout rate must be in [0, 1), got {dropout_rate}")

        for k, (prev, nxt) in enumerate(zip(layers[:-1], layers[1:])):
            if prev.out_dim != nxt.in_dim:
                raise DimensionError(
                    f"Layer {k} outputs {prev.out_dim} but layer {k + 1} expects {nxt.in_dim}"
                )

        if layers[-1].activation != "identity":
            raise ValueError("Final layer must use identity activation")

        self.layers = layers
        self.dropout_rate = float(dropout_rate)
        self.net_id = next(_NET_IDS)
        self._version = 0

    @classmethod
    def build(
        cls,
        in_dim: int,
        hidden: list[int],
        out_dim: int,
        activation: str,
        rng: np.random.Generator,
        dropout_rate: float = 0.0,
        spectral: bool = False,
        out_gain: float = 1.0
    ) -> "Mlp":
        """ Orthogonally initialised net; spectral state on hidden layers only """

        dims = [in_dim] + list(hidden)
        layers = [
            DenseLayer.initialise(d_in, d_out, activation, np.sqrt(2.0), rng, spectral)
            for d_in, d_out in zip(dims[:-1], dims[1:])
        ]
        layers.append(DenseLayer.initialise(dims[-1], out_dim, "identity", out_gain, rng))

        return cls(layers, dropout_rate)

    @property
    def in_dim(self) -> int:
        return self.layers[0].in_dim

    @property
    def out_dim(self) -> int:
        return self.layers[-1].out_dim

    @property
    def hidden_dims(self) -> list[int]:
        return [layer.out_dim for layer in self.layers[:-1]]

    @property
    def version(self) -> int:
        return self._version

    def parameters(self) -> dict[str, np.ndarray]:
        params = {}

        for i, layer in enumerate(self.layers):
            params[f"{i}.weight"] = layer.weight.copy()
            params[f"{i}.bias"] = layer.bias.copy()

        return params

    def set_parameters(self, params: dict[str, np.ndarray]) -> None:
        for i, layer in enumerate(self.layers):
            weight = np.asarray(params[f"{i}.weight"], dtype=np.float64)
            bias = np.asarray(params[f"{i}.bias"], dtype=np.float64)

            if weight.shape != layer.weight.shape or bias.shape != layer.bias.shape:
                raise DimensionError(f"Parameter shapes for layer {i} do not match")

            layer.weight = weight.copy()
            layer.bias = bias.copy()

        self._version += 1

    def spectral_state(self) -> dict[str, np.ndarray]:
        return {f"{i}.u": layer.u.copy() for i, layer in enumerate(self.layers) if layer.spectral}

    def set_spectral_state(self, state: dict[str, np.ndarray]) -> None:
        for i, layer in enumerate(self.layers):
            if layer.spectral:
                layer.u = np.asarray(state[f"{i}.u"], dtype=np.float64).copy()

        self._version += 1

    def update_spectral(self, iterations: int = 1) -> None:
        """ One or more power-iteration rounds on every spectral layer """

        if not any(layer.spectral for layer in self.layers):
            return

        for layer in self.layers:
            layer.power_iteration(iterations)

        self._version += 1

    def copy(self) -> "Mlp":
        return Mlp([layer.copy() for layer in self.layers], self.dropout_rate)


#-------------------------------------------------------------------------

def forward(
    net: Mlp,
    x: np.ndarray,
    mask: DropoutMask | None = None
) -> tuple[np.ndarray, ForwardCache]:

    x = np.asarray(x, dtype=np.float64)
    batched = x.ndim == 2

    if x.ndim not in (1, 2) or x.shape[-1] != net.in_dim:
        raise DimensionError(f"Expected input of length {net.in_dim}, got shape {x.shape}")

    if mask is not None and len(mask.masks) != len(net.layers) - 1:
        raise DimensionError("Dropout mask does not match hidden layer count")

    h = np.atleast_2d(x)
    inputs, pre_activations, activations, sigmas = [], [], [], []

    for i, layer in enumerate(net.layers):
        sigma = layer.sigma()
        weight = layer.weight / sigma if layer.spectral else layer.weight

        pre = h @ weight.T + layer.bias
        act = activate(pre, layer.activation)

        inputs.append(h)
        pre_activations.append(pre)
        activations.append(act)
        sigmas.append(sigma)

        if mask is not None and i < len(net.layers) - 1:
            h = act * mask.masks[i]
        else:
            h = act

    output = h if batched else h[0]

    cache = ForwardCache(
        inputs, pre_activations, activations, sigmas, mask, net.net_id, net.version, batched
    )

    return output, cache


def backward(
    net: Mlp,
    cache: ForwardCache,
    grad_output: np.ndarray
) -> tuple[dict[str, np.ndarray], np.ndarray]:

    """ Exact reverse pass through the same effective weights and mask.
        Parameter grads are summed over the batch rows. """

    if cache.net_id != net.net_id or cache.version != net.version:
        raise CacheError("Forward cache does not belong to the current network parameters")

    g = np.asarray(grad_output, dtype=np.float64)

    if g.ndim != (2 if cache.batched else 1):
        raise DimensionError(f"grad_output rank {g.ndim} does not match forward input")

    g = np.atleast_2d(g)

    if g.shape != cache.activations[-1].shape:
        raise DimensionError(
            f"grad_output shape {g.shape} does not match output {cache.activations[-1].shape}"
        )

    grads = {}

    for i in reversed(range(len(net.layers))):
        layer = net.layers[i]

        if cache.mask is not None and i < len(net.layers) - 1:
            g = g * cache.mask.masks[i]

        g = g * activation_grad(cache.pre_activations[i], cache.activations[i], layer.activation)
        grad_eff = g.T @ cache.inputs[i]

        if layer.spectral:
            sigma = cache.sigmas[i]
            weight_eff = layer.weight / sigma
            v = layer.weight.T @ layer.u / sigma
            # d(W/sigma)/dW with sigma = ||W^T u||
            grad_weight = grad_eff / sigma - (np.sum(grad_eff * layer.weight) / sigma ** 2) * np.outer(layer.u, v)
        else:
            weight_eff = layer.weight
            grad_weight = grad_eff

        grads[f"{i}.weight"] = grad_weight
        grads[f"{i}.bias"] = g.sum(axis=0)
        g = g @ weight_eff

    grad_input = g if cache.batched else g[0]

    return grads, grad_input


#-------------------------------------------------------------------------

def sample_dropout_mask(
    net: Mlp,
    rng: np.random.Generator,
    batch_size: int | None = None
) -> DropoutMask:

    """ Bernoulli keep-masks over hidden units, scaled by 1/(1-p).
        p = 0 returns ones without consuming random numbers. """

    p = net.dropout_rate

    def shape(units: int) -> tuple[int, ...]:
        return (units,) if batch_size is None else (batch_size, units)

    if p == 0.0:
        return DropoutMask([np.ones(shape(d)) for d in net.hidden_dims], 0.0, {"draws": 0})

    provenance = {"bit_generator": rng.bit_generator.state, "batch_size": batch_size}
    masks = [(rng.random(shape(d)) >= p) / (1.0 - p) for d in net.hidden_dims]

    return DropoutMask(masks, p, provenance)
