"""Falsify and cross-check convexity and L-smoothness inequalities."""

from ._core import *  # noqa: F401,F403
from ._core import __version__, catalog  # noqa: F401
