"""Chain definitions: jump sets, domains, rate fields and built-in models
"""
from .lattice import JumpSet, Domain, Box, whole_space, lattice_spacing
from .rates import (RateField, SymmetricWalkField, CurieWeissField,
                    SinusoidalField, FieldFunction, MODES, check_mode)
from .chain import (ChainSpec, NormalizationReport, normalization_check,
                    ProbePlan, ProbeReport, hypothesis_probe)
from .builtins import builtin_symmetric_walk, builtin_curie_weiss
