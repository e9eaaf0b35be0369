"""Built-in example models
"""
import numbers
import numpy as np
from latticeldp.exceptions import ValidationError
from latticeldp.model.chain import ChainSpec
from latticeldp.model.rates import (SymmetricWalkField, CurieWeissField,
                                    SinusoidalField, FieldFunction)
import logging
logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())


def builtin_symmetric_walk(d=1, epsilon=0.01, horizon=1.0, phi0=None):
    """Symmetric nearest-neighbour walk on εZ^d: Δ = {±e_k}, g ≡ 1/(2d), Λ = R^d

    Args:
      d: dimension (>= 1)
      epsilon: lattice scale
      horizon: macroscopic time T
      phi0: start point (default: origin)
    """
    if d < 1:
        raise ValidationError(f"Symmetric walk needs dimension d >= 1. Got {d}")
    field = SymmetricWalkField(d)
    phi0 = np.zeros(d) if phi0 is None else phi0
    return ChainSpec(epsilon=epsilon, rate_field=field, phi0=phi0, horizon=horizon)


def _as_field(field_fn, field_bound=None, field_lipschitz=None):
    if field_fn is None:
        return SinusoidalField()
    if isinstance(field_fn, numbers.Real):
        return SinusoidalField(offset=field_fn)
    if isinstance(field_fn, (SinusoidalField, FieldFunction)):
        return field_fn
    if callable(field_fn):
        if field_bound is None or field_lipschitz is None:
            raise ValidationError("A custom field function needs field_bound and field_lipschitz")
        return FieldFunction(field_fn, field_bound, field_lipschitz)
    raise ValidationError(f"Unable to use {field_fn} as external field")


def builtin_curie_weiss(beta, field_fn=None, lattice_size_hint=100, horizon=1.0, phi0=0.0,
                        self_interaction=False, field_bound=None, field_lipschitz=None):
    """Glauber dynamics of the Curie-Weiss magnetization m ∈ [-1, 1]

    Args:
      beta: inverse temperature (>= 0)
      field_fn: external field h(s); None (zero), a number (constant),
        SinusoidalField, or a callable together with `field_bound` and `field_lipschitz`
      lattice_size_hint: number of spins N. ε = 1/N with N rounded up to
        an even number so that ±1 are lattice points of 2εZ
      horizon: macroscopic time T
      phi0: starting magnetization
      self_interaction: use the exact finite-N heat-bath rates (f⁽¹⁾ ≠ 0)
    """
    n = int(np.ceil(lattice_size_hint))
    if n < 2:
        raise ValidationError(f"lattice_size_hint has to be >= 2. Got {lattice_size_hint}")
    if n % 2:
        logger.info(f"Rounding lattice size {n} up to {n + 1} so that m = ±1 are lattice points")
        n += 1
    field = CurieWeissField(beta, _as_field(field_fn, field_bound, field_lipschitz),
                            self_interaction=self_interaction)
    return ChainSpec(epsilon=1.0 / n, rate_field=field, phi0=phi0, horizon=horizon)
