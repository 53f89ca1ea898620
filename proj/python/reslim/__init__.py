"""Resistance metric spaces, walks with local times, and tree scaling limits."""

from ._reslim import *  # noqa: F401,F403
from ._reslim import __doc__, version

__version__ = version()
