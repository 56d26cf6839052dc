"""Exception hierarchy shared by the computation modules and the CLI."""


class NanophononError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(NanophononError, ValueError):
    """A parameter violates a documented invariant or precondition."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class ConfigParseError(ValidationError):
    """Material config text is malformed."""


class DomainError(ValidationError):
    """An argument lies outside the mathematical domain of a model."""


class NotFoundError(ValidationError, KeyError):
    """Lookup of a named preset failed."""

    def __str__(self):
        return self.args[0] if self.args else ""


class ModeCountError(ValidationError):
    """Mode enumeration would exceed the configured resource ceiling."""


class InfeasibleError(NanophononError):
    """A tuning target cannot be met with the available geometry."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
