"""
Random streams and replica blocks for Monte Carlo runs
"""
import numpy as np
import gin
from latticeldp.exceptions import ValidationError


@gin.configurable
def mc_block_size(block_size=8192):
    """Number of replicas simulated together by one worker call.

    The block partition (and with it every random stream) depends only on
    `n_samples` and `block_size`, never on the worker count.
    """
    if block_size < 1:
        raise ValidationError(f"block_size has to be >= 1. Got {block_size}")
    return int(block_size)


def get_block_sizes(n_samples, block_size):
    """Split `n_samples` replicas into consecutive blocks

    Args:
      n_samples: total number of replicas
      block_size: maximal number of replicas per block

    Returns:
      np.array of block sizes summing to n_samples
    """
    if n_samples < 1:
        raise ValidationError(f"n_samples has to be >= 1. Got {n_samples}")
    n_full, rest = divmod(int(n_samples), int(block_size))
    sizes = [block_size] * n_full
    if rest:
        sizes.append(rest)
    sizes = np.array(sizes, dtype=int)
    assert sizes.sum() == n_samples
    return sizes


def stream_rng(seed, stream):
    """64-bit counter-based generator for stream `stream` of the run `seed`

    Args:
      seed: non-negative integer run seed
      stream: non-negative integer stream index (block or replica)
    """
    if seed < 0 or stream < 0:
        raise ValidationError(f"seed and stream index have to be non-negative. Got {seed}, {stream}")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(stream)])))


def categorical_draw(probs, u):
    """Inverse-CDF categorical draw

    Args:
      probs: array (n, m) of row-wise probabilities (rows need not be exactly normalized)
      u: uniforms in [0, 1), shape (n,)

    Returns:
      integer indices (n,) in [0, m); zero-probability columns are never selected
    """
    probs = np.asarray(probs, dtype=float)
    cum = np.cumsum(probs, axis=-1)
    total = cum[..., -1:]
    idx = (u[:, np.newaxis] * total >= cum).sum(axis=-1)
    # rounding can push idx past the last supported column
    last = probs.shape[-1] - 1 - np.argmax(probs[:, ::-1] > 0, axis=-1)
    return np.minimum(idx, last)
