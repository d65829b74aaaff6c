"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class PortraitError(Exception):
    """Base class for every error raised by this package."""


class InputError(PortraitError, ValueError):
    """The user-supplied system cannot be analysed."""


class DegreeUnsupported(InputError):
    pass


class ZeroLeadingCoefficient(InputError):
    pass


class ZeroLambdaOnSimpleRoot(PortraitError):
    """A simple root has vanishing derivative; the multiplicity clustering is wrong."""


class NoNontrivialSolution(PortraitError):
    pass


class CommensurabilityUndecided(PortraitError):
    """Frequencies (or node eigenvalues) have no small-denominator integer ratio."""


class SingularPoint(PortraitError, ValueError):
    pass


class OutsideDisk(PortraitError, ValueError):
    pass


class ChartDomainExceeded(PortraitError, ValueError):
    pass


class TraceBudgetExceeded(PortraitError):
    pass


class ConfigurationInconsistent(PortraitError):
    pass


class NotACenter(PortraitError, ValueError):
    pass


class NonRationalIntegral(PortraitError, TypeError):
    pass
