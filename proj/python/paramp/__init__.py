"""Parametric image amplification in planar and confocal optical cavities."""

from ._paramp import *  # noqa: F401,F403
from ._paramp import __doc__  # noqa: F401
