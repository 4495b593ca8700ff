"""Exception types shared across the simulator."""


class ConfigError(ValueError):
    """A configuration key or value is invalid."""


class EnergyConservationError(ValueError):
    """Requested power ratios exceed the available budget."""


class InfeasibleProfileError(ValueError):
    """No coupling sequence can realize the requested radiation profile."""


class ArchitectureMismatchError(ValueError):
    """The operation requires the other feed architecture."""
