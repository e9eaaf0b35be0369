"""
"""
import os
from pytest import fixture
from pathlib import Path
import gin
from latticeldp.model import builtin_symmetric_walk, builtin_curie_weiss


@fixture(scope='session')
def test_dir():
    import inspect
    filename = inspect.getframeinfo(inspect.currentframe()).filename
    return Path(os.path.dirname(os.path.abspath(filename)))


@fixture(scope='session')
def data_dir(test_dir):
    return test_dir / 'data'


@fixture(scope='session')
def walk1d_json(data_dir):
    return data_dir / 'walk1d.json'


@fixture(scope='session')
def walk1d_k12_json(data_dir):
    return data_dir / 'walk1d_k12.json'


@fixture(scope='session')
def cw_json(data_dir):
    return data_dir / 'cw.json'


@fixture(scope='session')
def config_gin(data_dir):
    return data_dir / 'config.gin'


@fixture(scope='session')
def walk1d():
    return builtin_symmetric_walk(d=1, epsilon=0.01, horizon=1.0)


@fixture(scope='session')
def walk1d_k12():
    """1-D walk with K = 12 steps; small enough for exhaustive enumeration
    """
    return builtin_symmetric_walk(d=1, epsilon=1.0 / 12, horizon=1.0)


@fixture(scope='session')
def walk2d():
    return builtin_symmetric_walk(d=2, epsilon=0.01, horizon=1.0)


@fixture(scope='session')
def cw():
    """Curie-Weiss, β = 2, no field, N = 100, started at m = 0.2
    """
    return builtin_curie_weiss(2.0, lattice_size_hint=100, horizon=2.0, phi0=0.2)


@fixture(scope='session')
def cw_field():
    """Curie-Weiss with a time-dependent field and finite-size rates
    """
    from latticeldp.model import SinusoidalField
    return builtin_curie_weiss(1.0, field_fn=SinusoidalField(0.05, 0.1, 2.0), lattice_size_hint=50,
                               horizon=1.0, phi0=0.0, self_interaction=True)


@fixture
def clean_gin():
    gin.clear_config()
    yield
    gin.clear_config()
