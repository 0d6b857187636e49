"""Herding avalanches of technical traders on a small-world network."""

from ._fquake import *  # noqa: F401,F403
from ._fquake import __doc__  # noqa: F401

__version__ = "0.1.0"
