"""Shared exception types."""


class ContractError(ValueError):
    """A run-time precondition was violated (bad range, negative size)."""


class EmptyDistributionError(RuntimeError):
    """A weighted choice was executed with total weight zero."""


class StagingError(RuntimeError):
    """Stage-one misuse: empty choice list, escaped recursion handle,
    ill-scoped program."""


class DerivationError(ValueError):
    """A schema does not satisfy the well-formedness rules."""
