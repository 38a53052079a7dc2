"""Exception types shared across the package."""


class DpsearchError(Exception):
    """Base class for all package-specific errors."""


class EvaluationError(DpsearchError):
    """An expression could not be evaluated on the given state."""


class UnknownSymbolError(EvaluationError):
    """A variable, table, or parameter name could not be resolved."""


class ExpressionParseError(DpsearchError):
    """Malformed expression text."""


class ModelError(DpsearchError):
    """A model (or one of its parts) violates a structural requirement."""


class DocumentError(DpsearchError):
    """A domain, problem, or solver document is malformed."""


class DepthLimitError(DpsearchError):
    """Recursion exceeded the depth limit, which signals an undeclared cycle."""
