"""Exception types shared across the package."""


class DataError(Exception):
    """Malformed or inconsistent input data (files, indices, configs)."""


class NumericalError(Exception):
    """A numerical procedure failed (factorization breakdown, no convergence)."""
