"""
errors

A module to define the exceptions and warnings raised by latticesums
"""


class LatticeSumError(Exception):
    """Base class for every error raised by latticesums."""


class ArrangementError(LatticeSumError, ValueError):
    """Malformed arrangement, weight vector or target point."""


class ExcludedPoint(LatticeSumError):
    """
    The target y lies on a translated hyperplane where the lattice sum
    diverges.

    Args:
        functional (str): name of the indispensable functional f
        hyperplane (str): description of the hyperplane family
    """

    def __init__(self, functional, hyperplane):
        self.functional = functional
        self.hyperplane = hyperplane
        super().__init__(
            f"y lies on {hyperplane}, excluded for {functional} (k_f = 1)")


class NonDivisible(LatticeSumError):
    """
    A truncated series is not divisible by a constant-free linear form.

    Args:
        residual (dict): exponent tuple -> nonzero residual coefficient
        norm (float): magnitude of the largest residual coefficient
    """

    def __init__(self, residual, norm=None, divisor=None):
        self.residual = residual
        self.norm = norm
        self.divisor = divisor
        shown = sorted(residual.items())[:3]
        super().__init__(
            f"series is not divisible by {divisor}: {len(residual)} "
            f"residual terms, e.g. {shown}")


class NotSimple(LatticeSumError):
    """A polytope P(m;y) has a vertex on more than n facets."""


class DegenerateExponent(LatticeSumError):
    """An edge direction of a simple polytope annihilates the exponent."""


class RankDrop(LatticeSumError):
    """A sub-arrangement no longer spans the full rank."""


class UnknownFamily(LatticeSumError):
    """zeta_from_S was asked about an undocumented symmetric family."""


class VerificationFailure(LatticeSumError):
    """Two independent computations of the same quantity disagree."""


class LatticeSumWarning(UserWarning):
    """Recoverable numerical or input condition."""
