"""Exception types shared across the package."""


class GraphError(ValueError):
    """Invalid vertex, edge, or graph construction input."""


class MpgFormatError(GraphError):
    """Malformed MPG text; carries a stable error code.

    Codes: ``malformed-header``, ``malformed-line``, ``vertex-out-of-range``,
    ``intra-class-edge``, ``duplicate-edge``.
    """

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


class ConstructionError(ValueError):
    """A recipe violates one of its operator hypotheses."""


class HypothesisError(ValueError):
    """A bound formula was applied outside its stated hypotheses."""


class PreconditionError(ValueError):
    """An operation precondition does not hold for the given input."""


class BudgetExhausted(RuntimeError):
    """A search exceeded its node budget; the outcome is unknown, never wrong."""


class ClaimRefuted(Exception):
    """Certification found a counterexample to a claim."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class InvariantError(RuntimeError):
    """An internal invariant that theory guarantees was violated; a bug."""
