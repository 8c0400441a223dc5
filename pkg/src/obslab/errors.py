"""
Exception hierarchy for obslab.

Every failure raised by the numerical modules derives from ObslabError. The
command-line runner maps ConfigError to exit code 2 and NumericalFailure to
exit code 3; inequality violations are reported as data, never raised.

Classes:
    ObslabError: Root of the hierarchy
    ConfigError: Invalid or unreadable experiment configuration
    NumericalFailure: A computation could not produce a trustworthy value
    DomainError: Argument outside the domain of a formula
    NoConvergence: Iterative solver exhausted its budget
    QuadratureError: Integration tolerance unreachable
    NoRoot: Bracketing root search found no sign change
    NoFeasibleN: Schedule search exhausted its index range
    TailError: Series evaluation lost finiteness
    ParamError: Inconsistent model parameters
    SeparationError: Cantor lengths violate 2c_{k+1} < c_k
    CoverageFailure: A returned cover misses sublevel points
    DegenerateSet: Observation set with zero empirical content
    EmptySpace: Spectral subspace contains no eigenfunction
    BoundViolation: Analytic growth bound exceeded
    MassViolation: Bad-cell mass exceeds half the amalgam norm
"""


class ObslabError(Exception):
    """Base class for all obslab errors."""


class ConfigError(ObslabError):
    """Raised when an experiment configuration cannot be used."""


class NumericalFailure(ObslabError):
    """Raised when a numerical routine cannot certify its result."""


class DomainError(NumericalFailure):
    """Raised when an argument lies outside a formula's domain."""


class NoConvergence(NumericalFailure):
    """Raised when an iterative method hits its iteration cap."""


class QuadratureError(NumericalFailure):
    """Raised when adaptive quadrature misses its tolerance."""


class NoRoot(NumericalFailure):
    """Raised when a bracket contains no root."""


class NoFeasibleN(NumericalFailure):
    """Raised when no schedule index satisfies the time budget."""


class TailError(NumericalFailure):
    """Raised when an entire-function evaluation overflows."""


class ParamError(ObslabError):
    """Raised for inconsistent model parameters."""


class SeparationError(ObslabError):
    """Raised when Cantor interval lengths are not separated."""


class CoverageFailure(ObslabError):
    """Raised when a cover fails its sampling check."""


class DegenerateSet(ObslabError):
    """Raised when an observation set has no usable content."""


class EmptySpace(ObslabError):
    """Raised when a spectral subspace is empty."""


class BoundViolation(ObslabError):
    """Raised when an analytic growth bound is exceeded."""


class MassViolation(ObslabError):
    """Raised when bad cells carry more than half of the mass."""
