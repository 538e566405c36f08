"""Rigorous Hausdorff dimension brackets for invariant sets of contraction maps.

The dimension is the exponent s at which the spectral radius of a transfer
operator equals one.  Piecewise linear (1D) or bilinear (2D) collocation
with a priori eigenfunction bounds gives nonnegative matrices A_s <= B_s
whose spectral radii enclose it; Collatz-Wielandt ratios certify the ends.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    CertificationError,
    ConfigurationError,
    HausdimError,
    InputError,
    InvarianceError,
    MeshTooCoarseError,
)
from .problems import (  # noqa: E402
    complex_problem,
    continued_fraction_problem,
    perturbed_cantor_problem,
)
from .solver import DimensionBracket, find_bracket  # noqa: E402

__all__ = [
    "__version__",
    "CertificationError",
    "ConfigurationError",
    "HausdimError",
    "InputError",
    "InvarianceError",
    "MeshTooCoarseError",
    "DimensionBracket",
    "find_bracket",
    "complex_problem",
    "continued_fraction_problem",
    "perturbed_cantor_problem",
]
