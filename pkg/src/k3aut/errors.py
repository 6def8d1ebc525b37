"""Exception types shared across the library.

``DomainError`` marks inputs outside an operation's mathematical domain;
the command line maps it to exit code 2.  Anything else escaping to the
CLI is an internal failure (exit code 1).
"""


class DomainError(ValueError):
    """Input outside the operation's mathematical domain."""


class SquareInputError(DomainError):
    """A positive non-square value of d is required."""


class OnlyTrivialError(DomainError):
    """u^2 - d v^2 = 1 with square d is solved only by (+-1, 0)."""


class MismatchedDError(DomainError):
    """Pell solutions over different d cannot be combined."""


class ZeroMError(DomainError):
    """The target norm m of a generalized Pell equation must be nonzero."""


class DegenerateError(DomainError):
    """Gram matrix with b^2 - 4ac <= 0, not of signature (1, 1)."""


class NotIsometryError(DomainError):
    """Matrix does not preserve the bilinear form of the lattice."""


class ZeroKError(DomainError):
    """Self-intersection 0 is decided by has_zero_class, not represent."""


class SquareDiscriminantError(DomainError):
    """Operation requires a lattice with non-square discriminant."""


class ZeroClassError(DomainError):
    """The zero vector cannot seed an orbit of divisor classes."""


class NotRealizableError(DomainError):
    """No smooth curve of this degree and genus lies on a quartic surface."""


class NoHyperbolicIsometryError(RuntimeError):
    """Internal enumeration failure: no hyperbolic isometry was found."""
