"""Sample-path large deviations of Markov chains on ε-lattices
"""
__version__ = '0.1.0'

from . import exceptions
from . import model
from . import legendre
from . import action
from . import simulate
from . import verify
