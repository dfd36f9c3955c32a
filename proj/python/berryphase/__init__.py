"""Berry phases of the generalized harmonic oscillator."""

from ._core import *  # noqa: F401,F403
from ._core import __version__, BerryError, ValidationError, InvalidArgumentError  # noqa: F401
