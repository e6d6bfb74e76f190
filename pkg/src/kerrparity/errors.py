"""Exception types raised by the simulator.

Everything derives from ``ValueError`` so callers that only care about bad
input can catch that; the CLI maps :class:`NumericalError` to exit status 1.
"""


class NumericalError(ValueError):
    """Base class for domain and numerical failures."""


class DomainError(NumericalError):
    """A parameter lies outside the region where the model is defined."""


class TruncationError(NumericalError):
    """A Fock-space cutoff is too small for the requested amplitude."""

    def __init__(self, message, tail_mass=None):
        super().__init__(message)
        self.tail_mass = tail_mass


class GridError(NumericalError):
    """A quadrature grid is too coarse for the requested tolerance."""


class StructureError(NumericalError):
    """An operator is not of the coherent-dyad form it was assumed to have."""
