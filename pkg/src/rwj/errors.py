"""Exception types shared across the package."""


class RwjError(Exception):
    """Base class for all library errors."""


class GraphFormatError(RwjError):
    """Malformed graph6 / edge-list input, or invalid generator parameters."""


class DisconnectedGraphError(RwjError):
    """The operation requires a connected graph."""


class GenerationError(RwjError):
    """A random generator failed to produce a connected graph within budget."""


class NumericalError(RwjError):
    """Eigensolver failure or a violated numerical invariant."""


class BranchCrossingError(NumericalError):
    """Eigenvector continuation lost its branch (overlap fell below threshold)."""


class ConventionError(RwjError):
    """No eigenvalue is admissible under the requested selection convention."""
