"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the domain of a function."""


class AdmissibilityError(DomainError):
    """Field or potential violates the hypotheses the bounds rely on."""


class NumericalError(RuntimeError):
    """A numerical procedure failed to converge.

    ``diagnostics`` carries whatever the failing routine knew at the time
    (last estimates, iteration counts, ...).
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class ConfigError(ValueError):
    """Invalid command-line or config-file input."""
