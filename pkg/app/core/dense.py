"""
Fully connected network with hand-written backpropagation.
"""
from dataclasses import dataclass

import numpy as np

from core.exceptions import ConfigurationError

RELU = 'relu'
IDENTITY = 'identity'
ACTIVATIONS = (RELU, IDENTITY)


@dataclass(eq=False)
class DenseLayer:
    """``activation(x @ weight.T + bias)``; weight is (out, in)."""
    weight: np.ndarray
    bias: np.ndarray
    activation: str = RELU

    def __post_init__(self):
        if self.activation not in ACTIVATIONS:
            raise ConfigurationError(
                f'Unknown activation {self.activation!r}'
            )
        if self.bias.shape != (self.weight.shape[0],):
            raise ConfigurationError('Bias width must match weight rows')

    @property
    def in_width(self):
        return self.weight.shape[1]

    @property
    def out_width(self):
        return self.weight.shape[0]


class DenseNetwork:
    """A stack of dense layers ending in a single output unit.

    Dropout applies to hidden layer outputs at train time only, with
    inverted scaling so inference needs no rescale.
    """

    def __init__(self, layers, dropout=0.0):
        if not layers:
            raise ConfigurationError('A network needs at least one layer')
        for prev, layer in zip(layers, layers[1:]):
            if prev.out_width != layer.in_width:
                raise ConfigurationError(
                    f'Layer widths do not chain: {prev.out_width} -> '
                    f'{layer.in_width}'
                )
        if layers[-1].out_width != 1:
            raise ConfigurationError('The final layer must have width 1')
        if not 0.0 <= dropout < 1.0:
            raise ConfigurationError('dropout must be in [0, 1)')
        self.layers = list(layers)
        self.dropout = dropout

    @property
    def in_width(self):
        return self.layers[0].in_width

    def forward(self, x, train_mode=False, rng=None):
        """Return the (batch, 1) output and the cache for ``backward``."""
        if x.shape[-1] != self.in_width:
            raise ConfigurationError(
                f'Network expects width {self.in_width}, got {x.shape[-1]}'
            )
        cache = []
        h = x
        last = len(self.layers) - 1
        for idx, layer in enumerate(self.layers):
            z = h @ layer.weight.T + layer.bias
            a = np.maximum(z, 0.0) if layer.activation == RELU else z
            mask = None
            if train_mode and self.dropout > 0 and idx < last:
                keep = 1.0 - self.dropout
                mask = (rng.random(a.shape) < keep) / keep
                a = a * mask
            cache.append((h, z, mask))
            h = a
        return h, cache

    def backward(self, cache, upstream):
        """Chain rule through the cached pass.

        Returns per-layer ``(dweight, dbias)`` and the input gradient. The
        relu subgradient at 0 is 0.
        """
        grads = [None] * len(self.layers)
        g = upstream
        for idx in reversed(range(len(self.layers))):
            layer = self.layers[idx]
            h, z, mask = cache[idx]
            if mask is not None:
                g = g * mask
            if layer.activation == RELU:
                g = g * (z > 0)
            grads[idx] = (g.T @ h, g.sum(axis=0))
            g = g @ layer.weight
        return grads, g

    def __call__(self, x):
        out, _ = self.forward(x)
        return out

    def preactivations(self, x):
        _, cache = self.forward(x)
        return [z for _, z, _ in cache]


def dense_forward_backward(net, x, upstream):
    """One forward and backward pass in inference mode.

    Returns ``(output, parameter gradients, input gradient)``.
    """
    out, cache = net.forward(np.asarray(x, dtype=np.float64))
    grads, input_grad = net.backward(
        cache, np.asarray(upstream, dtype=np.float64),
    )
    return out, grads, input_grad


def build_mlp(rng, in_width, hidden_layers, hidden_width=None,
              init_range=0.1):
    """Relu hidden layers of ``hidden_width`` then a linear output unit."""
    hidden_width = hidden_width or in_width
    layers = []
    width = in_width
    for _ in range(hidden_layers):
        layers.append(DenseLayer(
            weight=rng.uniform(-init_range, init_range, (hidden_width, width)),
            bias=np.zeros(hidden_width),
            activation=RELU,
        ))
        width = hidden_width
    layers.append(DenseLayer(
        weight=rng.uniform(-init_range, init_range, (1, width)),
        bias=np.zeros(1),
        activation=IDENTITY,
    ))
    return layers
