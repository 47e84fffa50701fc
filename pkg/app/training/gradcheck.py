"""
Finite-difference verification of analytic gradients.
"""
import numpy as np

DENOMINATOR_FLOOR = 1e-6


def relative_error(analytic, numeric, floor=DENOMINATOR_FLOOR):
    """|a - n| / max(|a|, |n|, floor), elementwise."""
    scale = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), floor)
    return np.abs(analytic - numeric) / scale


def numeric_gradient(loss_fn, param, eps=1e-5):
    """Central differences of ``loss_fn()`` over every entry of ``param``.

    ``param`` is perturbed in place and restored afterwards.
    """
    grad = np.zeros_like(param)
    flat = param.reshape(-1)
    out = grad.reshape(-1)
    for idx in range(flat.size):
        original = flat[idx]
        flat[idx] = original + eps
        plus = loss_fn()
        flat[idx] = original - eps
        minus = loss_fn()
        flat[idx] = original
        out[idx] = (plus - minus) / (2.0 * eps)
    return grad


def gradient_check(model, batch, eps=1e-5, l2=1e-3, seed=0, names=None):
    """Worst relative error between analytic and numeric gradients.

    Every call of the objective gets a fresh generator seeded with
    ``seed``, so sampled quantities (negative words) are identical across
    perturbations. Dropout is off.
    """
    def loss_and_grads():
        return model.objective(
            batch, l2=l2, rng=np.random.default_rng(seed), train_mode=False,
        )

    _, analytic = loss_and_grads()
    worst = 0.0
    for name in names or list(model.params):
        param = model.params[name]
        numeric = numeric_gradient(lambda: loss_and_grads()[0], param, eps)
        if param.size:
            worst = max(
                worst, float(np.max(relative_error(analytic[name], numeric)))
            )
    return worst


def kink_free_batch(model, draw, rng, tol=1e-4, attempts=100):
    """Redraw a batch until the model reports no kink within ``tol``.

    Kinks are relu pre-activations near zero and, for max-pooling
    encoders, near-ties between pooled windows.

    ``draw(rng)`` returns a batch; models without ``near_kink`` accept the
    first draw.
    """
    for _ in range(attempts):
        batch = draw(rng)
        near_kink = getattr(model, 'near_kink', None)
        if near_kink is None or not near_kink(batch, tol):
            return batch
    raise RuntimeError(f'No batch away from kinks in {attempts} draws')
