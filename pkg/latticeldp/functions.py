import numpy as np
from scipy.special import logsumexp


def softmax(x, axis=-1):
    """Compute softmax values along `axis`. -inf entries get probability 0.
    """
    x = np.asarray(x, dtype=float)
    m = np.max(x, axis=axis, keepdims=True)
    m = np.where(np.isfinite(m), m, 0.0)
    e_x = np.exp(x - m)
    return e_x / e_x.sum(axis=axis, keepdims=True)


def masked_logsumexp(x, axis=-1):
    """log Σ exp(x) treating -inf entries as absent. Empty support gives -inf.
    """
    x = np.asarray(x, dtype=float)
    finite = np.isfinite(x)
    with np.errstate(divide='ignore'):
        out = logsumexp(np.where(finite, x, -np.inf), axis=axis)
    return np.where(finite.any(axis=axis), out, -np.inf)
