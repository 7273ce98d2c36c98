"""Exact entropy tools for PL interval maps, relations and inverse limits."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
