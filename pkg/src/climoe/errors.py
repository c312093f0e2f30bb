"""Exception hierarchy shared across the package."""


class ClimoeError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(ClimoeError):
    """An array argument has the wrong length or dimensionality."""


class SchemaError(ClimoeError):
    """A dataset directory or file violates the on-disk schema."""


class ConfigError(ClimoeError):
    """A configuration value is out of its legal range."""


class NumericError(ClimoeError):
    """A non-finite value appeared where finite math is required."""


class ContractError(ClimoeError):
    """A caller-visible invariant was violated (e.g. unfrozen expert)."""
