"""Alias of :mod:`neelwall.halfline` under its module-list name."""

from .halfline import *  # noqa: F401,F403
