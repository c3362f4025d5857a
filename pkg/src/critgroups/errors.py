"""Exception types shared across the package.

Every error carries a short machine-readable ``code`` so the CLI can map
failures to exit statuses without string matching.
"""


class CritGroupError(ValueError):
    code = "ERROR"


class ContainmentViolation(CritGroupError):
    code = "CONTAINMENT_VIOLATION"


class NotAHomomorphism(CritGroupError):
    code = "NOT_A_HOMOMORPHISM"


class NotAComplex(CritGroupError):
    code = "NOT_A_COMPLEX"


class InfiniteGroupError(CritGroupError):
    code = "INFINITE_GROUP"


class GraphError(CritGroupError):
    code = "INVALID_GRAPH"


class SchemaError(GraphError):
    """JSON input with missing keys or values of the wrong type."""

    code = "SCHEMA"


class NotAGroupError(CritGroupError):
    code = "NOT_A_GROUP"


class CapExceeded(CritGroupError):
    code = "CAP_EXCEEDED"


class DisconnectedError(CritGroupError):
    code = "DISCONNECTED"


class DisconnectedBase(CritGroupError):
    code = "DISCONNECTED_BASE"


class HypothesisViolated(CritGroupError):
    code = "HYPOTHESIS_VIOLATED"


class UnderlyingMismatch(CritGroupError):
    code = "UNDERLYING_MISMATCH"


class BadParams(CritGroupError):
    code = "BAD_PARAMS"


class OutOfRegime(CritGroupError):
    code = "OUT_OF_REGIME"


class EvenPrime(CritGroupError):
    code = "EVEN_PRIME"
