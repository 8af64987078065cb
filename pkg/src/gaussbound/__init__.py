"""Fidelity and energy-difference bounds for single-mode Gaussian states."""

from .bounds import (
    COHERENT,
    DISPLACED,
    PURE,
    SUPERMIXED,
    BoundFamily,
    BoundResult,
    bound,
    bures_min,
    f_max,
    fixed_shape,
    mixed_equal_purity,
    pure_vs_mixed,
    y_max,
    zeta_limit,
    zeta_max,
)
from .exceptions import DomainError, QuadratureError, TruncationError, UnsupportedWitness
from .fidelity import bures_distance, compare_states, fidelity, fidelity_mixed, fidelity_pure
from .states import (
    MixedGaussianState,
    PureGaussianState,
    energy,
    moments,
    purity,
    zeta_from_purity,
)

__version__ = "0.1.0"
