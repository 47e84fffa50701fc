"""
Generalized matrix factorization: BPR-GMF.

y(u, i) = b_i + F(p_u * q_i)

F takes the elementwise product of the two factors, not their dot
product: a scalar input would make F a one-dimensional function. With a
single identity layer of unit weights F reduces to the dot product and
the model to BPR-MF.
"""
import numpy as np

from core.dense import DenseLayer, DenseNetwork, IDENTITY, RELU, build_mlp
from core.exceptions import ConfigurationError
from core.factors import LatentFactorModel


def _layer_names(idx):
    return f'mlp.{idx}.weight', f'mlp.{idx}.bias'


class GeneralizedFactorModel(LatentFactorModel):
    """Factor tables, item biases and a dense network over p_u * q_i."""
    kind = 'bpr-gmf'
    HYPERPARAMETERS = ('latent_dim', 'mlp_layers', 'dropout')

    @classmethod
    def initialize(cls, n_users, n_items, hyper, rng, context=None):
        base = LatentFactorModel.initialize(n_users, n_items, hyper, rng)
        d = int(hyper['latent_dim'])
        layers = build_mlp(rng, d, int(hyper.get('mlp_layers', 2)))
        params = dict(base.params)
        for idx, layer in enumerate(layers):
            weight_name, bias_name = _layer_names(idx)
            params[weight_name] = layer.weight
            params[bias_name] = layer.bias
        return cls(params, hyper, n_users, n_items, context=context)

    def __init__(self, params, hyper, n_users, n_items, context=None):
        super().__init__(params, hyper, n_users, n_items, context=context)
        if self.network.in_width != self.latent_dim:
            raise ConfigurationError(
                f'Network input width {self.network.in_width} does not '
                f'match latent_dim {self.latent_dim}'
            )

    @property
    def n_layers(self):
        return sum(1 for name in self.params if name.endswith('.weight'))

    @property
    def network(self):
        layers = []
        last = self.n_layers - 1
        for idx in range(self.n_layers):
            weight_name, bias_name = _layer_names(idx)
            layers.append(DenseLayer(
                weight=self.params[weight_name],
                bias=self.params[bias_name],
                activation=IDENTITY if idx == last else RELU,
            ))
        return DenseNetwork(
            layers, dropout=float(self.hyper.get('dropout', 0)),
        )

    def score_pairs(self, users, items):
        users, items = self.check_indices(users, items)
        product = self.user_factors[users] * self.item_factors[items]
        return self.item_bias[items] + self.network(product)[:, 0]

    def score_items(self, user, items=None):
        if items is None:
            items = np.arange(self.n_items)
        return self.score_pairs(np.full(len(items), user), items)

    def near_kink(self, batch, tol=1e-4):
        """True if any relu pre-activation of the batch is within ``tol``."""
        net = self.network
        P, Q = self.user_factors, self.item_factors
        x = np.vstack([
            P[batch.users] * Q[batch.pos],
            P[batch.users] * Q[batch.neg],
        ])
        preactivations = net.preactivations(x)
        return any(
            np.any(np.abs(z) < tol)
            for layer, z in zip(net.layers, preactivations)
            if layer.activation == RELU
        )

    def objective(self, batch, l2=0.0, rng=None, train_mode=True):
        u, i, j = batch.users, batch.pos, batch.neg
        size = len(u)
        P, Q = self.user_factors, self.item_factors
        pu, qi, qj = P[u], Q[i], Q[j]
        net = self.network
        out, cache = net.forward(
            np.vstack([pu * qi, pu * qj]), train_mode=train_mode, rng=rng,
        )
        margin_extra = out[:size, 0] - out[size:, 0]
        loss, grads, dmargin = self.factor_objective(
            batch, l2, margin_extra=margin_extra,
        )
        layer_grads, input_grad = net.backward(
            cache, np.concatenate([dmargin, -dmargin])[:, None],
        )
        g_pos, g_neg = input_grad[:size], input_grad[size:]
        np.add.at(grads['user_factors'], u, g_pos * qi + g_neg * qj)
        np.add.at(grads['item_factors'], i, g_pos * pu)
        np.add.at(grads['item_factors'], j, g_neg * pu)
        for idx, (dweight, dbias) in enumerate(layer_grads):
            weight_name, bias_name = _layer_names(idx)
            weight = self.params[weight_name]
            loss += l2 * float(np.sum(weight * weight))
            grads[weight_name] += dweight + 2.0 * l2 * weight
            grads[bias_name] += dbias
        return loss, grads


def score_gmf(model, net, u, i):
    """b_i + net(p_u * q_i) for one user and item, dropout off."""
    if net.in_width != model.latent_dim:
        raise ConfigurationError(
            f'Network input width {net.in_width} does not match '
            f'latent_dim {model.latent_dim}'
        )
    model.check_indices([u], [i])
    product = model.user_factors[u] * model.item_factors[i]
    return float(model.item_bias[i] + net(product[None, :])[0, 0])
