"""Stochastic simulator for an NV-nanodiamond viral-RNA relaxometry sensor."""

__version__ = "0.1.0"

from nvsensor.kernels import BACKEND

__all__ = ["BACKEND", "__version__"]
