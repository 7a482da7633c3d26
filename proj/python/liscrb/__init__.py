"""Cramer-Rao position and orientation bounds for LIS-aided mmWave MIMO."""

from ._liscrb import *  # noqa: F401,F403
from ._liscrb import __doc__  # noqa: F401
