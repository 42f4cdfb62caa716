"""Neural quantum states for the SYK and Heisenberg models."""

from ._syknqs import *  # noqa: F401,F403
from ._syknqs import __doc__  # noqa: F401
