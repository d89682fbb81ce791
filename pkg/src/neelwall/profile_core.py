"""Alias of :mod:`neelwall.profile` under its module-list name."""

from .profile import *  # noqa: F401,F403
