"""Frequency comb noise correlation toolkit.

Thin re-export of the compiled core: comb spectral model, quadrature noise
sampling, the pairwise-variance covariance protocol, cavity transfer
functions, and absolute shot-noise calibration.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
