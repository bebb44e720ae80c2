"""FitzHugh-Nagumo reaction-diffusion toolkit (C++ core)."""

from ._fhnlab import *  # noqa: F401,F403
from ._fhnlab import FhnError, ModelSpec, Interval  # noqa: F401

__version__ = "0.1.0"
