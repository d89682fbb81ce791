"""Alias of :mod:`neelwall.green` under its module-list name."""

from .green import *  # noqa: F401,F403
