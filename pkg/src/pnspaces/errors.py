"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class ConfigError(ValueError):
    """A space, set or grid description is malformed or inconsistent."""


class ClassificationError(ValueError):
    """A radius matches none of the four boundedness classes."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class PhiRejected(ValueError):
    """A candidate transform fails one of the admissibility conditions.

    ``condition`` names the failed requirement and ``witness`` is a point
    where it fails.
    """

    def __init__(self, condition, witness=None):
        msg = condition if witness is None else f"{condition} (witness x={witness:g})"
        super().__init__(msg)
        self.condition = condition
        self.witness = witness
