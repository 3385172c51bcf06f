class ConfigurationError(ValueError):
    """Invalid problem, grid, decomposition or experiment configuration."""


class DomainError(ValueError):
    """A point or index lies outside the grid."""


class ContractViolation(ValueError):
    """Numeric input that violates a local-solver precondition (e.g. NaN)."""
