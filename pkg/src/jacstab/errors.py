"""Exception hierarchy.

Input problems derive from ``JacstabError`` (a ``ValueError``); broken
internal invariants derive from ``InvariantBreach``.  The command line maps
the first family to exit status 2 and the second to exit status 3.
"""


class JacstabError(ValueError):
    pass


class InvalidGraph(JacstabError):
    pass


class InvalidSubcurve(JacstabError):
    pass


class InvalidSheaf(JacstabError):
    pass


class InvalidPolarization(JacstabError):
    pass


class ChiMismatch(JacstabError):
    """Euler characteristic of a sheaf differs from the polarization target."""


class NotSemistable(JacstabError):
    pass


class InvalidParts(JacstabError):
    pass


class BudgetExceeded(JacstabError):
    pass


class InvariantBreach(RuntimeError):
    pass


class ReductionCapExceeded(InvariantBreach):
    pass


class Infeasible(InvariantBreach):
    """No polarization found for a simple sheaf; should never happen."""
