"""Shared exception types."""


class StructuralError(ValueError):
    """A graph or generator violates a structural invariant."""


class LoopContractionError(ValueError):
    """Attempted to contract the self-loop of a rose."""


class FoldingError(RuntimeError):
    """A symmetry fixes a generator but permutes its marked edges with odd sign."""


class CapacityError(RuntimeError):
    """A configured resource cap was exceeded."""
