"""Exception types shared by the library, the CLI and external bindings.

Each error class carries the process exit code the CLI maps it to, so
embedders can translate failures without string matching.
"""

from __future__ import annotations

EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_DATA = 4
EXIT_INTERNAL = 5


class RadfuseError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = EXIT_INTERNAL


class ConfigError(RadfuseError):
    """A parameter set is self-inconsistent or out of its valid range."""

    exit_code = EXIT_CONFIG


class DataError(RadfuseError):
    """An input file or array is malformed, truncated or incompatible."""

    exit_code = EXIT_DATA


class DegenerateInverse(ConfigError):
    """Curvature recovery was requested at the anchor column (p = q).

    Every curvature value produces the same height there, so no inverse
    exists.
    """


class OutOfRange(ConfigError):
    """A height passed to the inverse lies outside the open interval (0, M)."""


class EmptyHarvest(ConfigError):
    """Plan construction found no usable curvature values for the config."""


class DimensionMismatch(DataError):
    """An image or matrix does not have the shape an operation requires."""


class ChannelMismatch(DataError):
    """A colour operation received data without the expected channel count."""


class EmptyRetina(DataError):
    """Border cropping found no pixel above the threshold (all-dark input)."""
