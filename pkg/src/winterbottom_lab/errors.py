"""Exception and warning types shared across the package."""

from __future__ import annotations

__all__ = [
    "ConfigError",
    "InvalidConfiguration",
    "InvalidPolygon",
    "NotStripCenter",
    "RegimeError",
    "TransformOrderError",
    "WindowWarning",
]


class ConfigError(ValueError):
    """Bad model parameters, schedules, CLI arguments or input files."""


class InvalidConfiguration(ValueError):
    """A site set that is not a valid film configuration (duplicates, k2 < 0, empty)."""


class NotStripCenter(ValueError):
    """Strip evaluation requested at an atom that carries no substrate bond."""


class RegimeError(ValueError):
    """Operation only defined in the opposite wetting/dewetting regime."""


class TransformOrderError(RuntimeError):
    """Second transformation stage called while some component lacks a substrate bond."""


class InvalidPolygon(ValueError):
    """Degenerate or self-intersecting polygon input."""


class WindowWarning(Warning):
    """An exact-search optimum touches the window edge; optimality is scoped to the window."""
