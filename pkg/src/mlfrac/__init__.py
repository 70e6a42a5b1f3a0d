"""mlfrac: numerics for time-fractional dispersive evolution equations.

Subpackages cover Mittag-Leffler evaluation, discrete fractional calculus,
Fourier symbols and their physical-space kernels, a spectral mild-solution
solver on periodic boxes, and grid-based Holder-norm estimation.
"""

__version__ = "0.1.0"

from .errors import NumericsError

__all__ = ["NumericsError", "__version__"]
