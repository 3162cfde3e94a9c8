"""Simulation and estimation toolkit for a two-state telegraph signal hidden
in white Gaussian noise: exact path simulation, the posterior probability
filter with parameter sensitivities, the method-of-moments estimator, and the
one-step / two-step scoring estimator processes with a Monte Carlo harness.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
