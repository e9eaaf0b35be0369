"""Model registry and other gin configurables

Rate-field plugins register a factory `ModelConfig -> ChainSpec`:

    @register_model('my_model')
    def my_model(config):
        return ChainSpec(epsilon=config.epsilon, rate_field=MyField(), phi0=config.phi0)
"""
import gin
import numpy as np
from latticeldp.exceptions import ValidationError
from latticeldp.model import builtin_symmetric_walk, builtin_curie_weiss, SinusoidalField

# modules registering gin configurables
from latticeldp import legendre  # noqa: F401
from latticeldp import action  # noqa: F401
from latticeldp import samplers  # noqa: F401

_MODELS = {}


def register_model(kind):
    """Register a model factory under `kind`
    """
    def decorator(fn):
        if kind in _MODELS:
            raise ValidationError(f"Model kind {kind} is already registered")
        _MODELS[kind] = fn
        return fn
    return decorator


def get_model_factory(kind):
    if kind not in _MODELS:
        raise ValidationError(f"Unknown model kind {kind}. Available: {list_models()}",
                              code="invalid_config")
    return _MODELS[kind]


def list_models():
    return sorted(_MODELS)


@register_model('symmetric_walk')
def symmetric_walk(config):
    return builtin_symmetric_walk(d=config.dimension,
                                  epsilon=0.01 if config.epsilon is None else config.epsilon,
                                  horizon=config.horizon,
                                  phi0=config.phi0 if config.phi0 else None)


@register_model('curie_weiss')
def curie_weiss(config):
    if config.beta is None:
        raise ValidationError("curie_weiss needs `beta`", code="invalid_config")
    if config.lattice_size is not None:
        n = config.lattice_size
    elif config.epsilon is not None:
        n = int(np.round(1.0 / config.epsilon))
    else:
        n = 100
    field = SinusoidalField(config.field_offset, config.field_amplitude, config.field_frequency)
    return builtin_curie_weiss(config.beta, field_fn=field, lattice_size_hint=n,
                               horizon=config.horizon,
                               phi0=config.phi0 if config.phi0 else 0.0,
                               self_interaction=config.self_interaction)


@gin.configurable
def mc_threads(threads=None):
    """Worker count used when a command gets no --threads flag
    """
    from latticeldp.utils import default_threads
    return default_threads() if threads is None else int(threads)
