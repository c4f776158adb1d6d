"""Exception hierarchy shared by the library and the CLI."""


class WeinsteinError(Exception):
    """Base class for all library errors."""


class DomainError(WeinsteinError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigurationError(WeinsteinError, ValueError):
    """Invalid grid, rule or run configuration."""


class ConvergenceError(WeinsteinError, ArithmeticError):
    """A series did not reach its tail tolerance within the term budget."""

    def __init__(self, message, last_term):
        super().__init__(f"{message} (last term magnitude {last_term:.3e})")
        self.last_term = last_term


class IntegrityError(WeinsteinError):
    """Two independent evaluation routes disagree beyond tolerance."""


class DegenerateInputError(WeinsteinError, ValueError):
    """Input for which the requested quantity is undefined (e.g. a zero function)."""


class ResourceError(WeinsteinError):
    """A computation would exceed a configured size cap."""
