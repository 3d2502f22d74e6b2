"""Exception hierarchy shared across the package.

All failures that carry numerical meaning (a pencil became singular, a
quadrature did not converge, ...) derive from :class:`DegevError` so callers
can distinguish them from programming errors.
"""


class DegevError(Exception):
    """Base class for all package-specific failures."""


class SingularPencil(DegevError):
    """The pencil lambda*M - L is (numerically) rank deficient."""


class IllConditioned(DegevError):
    """A solve was attempted too close to the pencil spectrum."""


class NotInDomain(DegevError):
    """A vector is not representable as M*w within the range tolerance."""


class NoConvergence(DegevError):
    """An iteration or adaptive quadrature exhausted its budget."""


class InsufficientDecay(DegevError):
    """The fitted resolvent decay exponent is not positive."""


class TruncationDominates(DegevError):
    """The contour truncation error exceeds the requested tolerance."""


class Diverged(DegevError):
    """An intermediate-space integral fails to decay in its tail."""


class ConsistencyMissing(DegevError):
    """Derivative output requested without compatibility data (v0, g0)."""


class InadmissibleExponents(DegevError):
    """A constant formula was evaluated with a non-positive denominator."""


class GateRejected(DegevError):
    """A regime check was requested with inadmissible exponents."""


class DegenerateGrid(DegevError):
    """A time grid contains repeated or non-increasing entries."""


class UnknownEntry(DegevError):
    """Requested gallery entry does not exist."""


class ParseError(DegevError):
    """A problem or config file does not conform to the expected format."""


class ValidationError(DegevError):
    """File contents parsed but violate a problem invariant."""
