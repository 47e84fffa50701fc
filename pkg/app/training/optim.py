"""
SGD and Adam with in-place parameter updates.
"""
from dataclasses import dataclass

import numpy as np

ADAM_BETAS = (0.9, 0.999)
ADAM_EPSILON = 1e-8


@dataclass
class AdamState:
    """First and second moment estimates and the step count."""
    m: np.ndarray
    v: np.ndarray
    t: int = 0

    @classmethod
    def zeros_like(cls, param):
        return cls(np.zeros_like(param), np.zeros_like(param), 0)


def adam_update(param, grad, state, learning_rate, betas=ADAM_BETAS,
                eps=ADAM_EPSILON):
    """One bias-corrected Adam step, applied to ``param`` in place."""
    if state.m.shape != param.shape:
        raise ValueError('Adam state shape does not match the parameter')
    beta1, beta2 = betas
    state.t += 1
    state.m *= beta1
    state.m += (1.0 - beta1) * grad
    state.v *= beta2
    state.v += (1.0 - beta2) * (grad * grad)
    m_hat = state.m / (1.0 - beta1 ** state.t)
    v_hat = state.v / (1.0 - beta2 ** state.t)
    param -= learning_rate * m_hat / (np.sqrt(v_hat) + eps)
    return param, state


class SGD:
    """Plain gradient descent with a constant learning rate."""

    def __init__(self, learning_rate):
        self.learning_rate = learning_rate

    def step(self, params, grads):
        for name, grad in grads.items():
            params[name] -= self.learning_rate * grad


class Adam:
    """Adam over a parameter dict; moments are created on first use."""

    def __init__(self, learning_rate, betas=ADAM_BETAS, eps=ADAM_EPSILON):
        self.learning_rate = learning_rate
        self.betas = betas
        self.eps = eps
        self.state = {}

    def prepare(self, params):
        """Create every moment buffer up front, before worker threads run."""
        for name, param in params.items():
            if name not in self.state:
                self.state[name] = AdamState.zeros_like(param)

    def step(self, params, grads):
        for name, grad in grads.items():
            if name not in self.state:
                self.state[name] = AdamState.zeros_like(params[name])
            adam_update(
                params[name], grad, self.state[name], self.learning_rate,
                self.betas, self.eps,
            )


def make_optimizer(name, learning_rate):
    if name == 'sgd':
        return SGD(learning_rate)
    if name == 'adam':
        return Adam(learning_rate)
    raise ValueError(f'Unknown optimizer {name!r}; choose sgd or adam')
