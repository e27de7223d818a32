"""Adaptive Bayesian phase estimation with spin-squeezed states."""

from ._spinbayes import *  # noqa: F401,F403
from ._spinbayes import __version__  # noqa: F401
