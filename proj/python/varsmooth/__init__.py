"""Variable smoothing for weakly convex composite problems."""

from ._varsmooth import *  # noqa: F401,F403
from ._varsmooth import __doc__  # noqa: F401
