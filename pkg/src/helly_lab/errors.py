"""Exception hierarchy shared by every module."""


class HellyLabError(Exception):
    """Base class for all errors raised by helly_lab."""


class FamilyError(HellyLabError, ValueError):
    """Invalid set family contents or family file."""


class GraphError(HellyLabError, ValueError):
    """Invalid graph contents or graph file."""


class DomainError(HellyLabError, ValueError):
    """Parameters outside the domain of a constructor, bound or search."""


class BudgetExceeded(HellyLabError):
    """An exhaustive routine would exceed its configured budget."""


class CanonicalLabelError(HellyLabError):
    """Canonical labeling could not be certified for this input."""


class InconsistencyError(HellyLabError):
    """Two independent routes disagreed. Always a bug."""
