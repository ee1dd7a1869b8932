"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ContractError(ValueError):
    """Mismatched inputs (wrong basis, wrong parameters, zero function, ...)."""


class NumericsError(RuntimeError):
    """A numerical procedure failed to converge or lost validity.

    Carries diagnostics in ``details`` when available.
    """

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details or {}
