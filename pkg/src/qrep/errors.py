"""Exception types shared across the package."""


class QrepError(Exception):
    """Base class for all package-specific errors."""


class NotDynkin(QrepError):
    """The underlying graph is not a simply-laced Dynkin diagram."""


class NotASink(QrepError):
    """The vertex has an outgoing arrow."""


class NotSinkOrSource(QrepError):
    """The vertex is neither a sink nor a source."""


class NotRigid(QrepError):
    """The given summand set has a non-vanishing self-extension."""


class CycleFound(QrepError):
    """No Hom/Ext-compatible ordering of the summands exists.

    Unreachable for rigid input; raised only to surface an internal
    inconsistency instead of silently emitting a wrong order.
    """


class NoSolution(QrepError):
    """The decomposition system is inconsistent (internal inconsistency)."""


class BudgetExceeded(QrepError):
    """A brute-force search space exceeded its enumeration budget.

    Inconclusive: distinct from a negative answer.
    """
