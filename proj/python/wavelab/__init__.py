"""Periodic pseudospectral solver and numerical estimate laboratory for a
nonlocal shallow-water model of moderate-amplitude surface waves."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
