"""Exception hierarchy shared by every pantslab module."""


class PantsLabError(Exception):
    """Base class for all library errors."""


class InvalidGraphError(PantsLabError, ValueError):
    """The graph violates a structural invariant (valence, connectivity, pairing)."""


class MalformedMoveError(PantsLabError, ValueError):
    """A move does not fit the graph it is applied to."""


class OverlappingBatchError(MalformedMoveError):
    """Two moves of a batch act on overlapping supports.

    Attributes:
        pair: the two offending moves.
    """

    def __init__(self, message, pair):
        super().__init__(message)
        self.pair = pair


class ReplayError(PantsLabError):
    """A schedule does not replay to its recorded end graph."""


class CapExceededError(PantsLabError):
    """An exhaustive computation would exceed its configured size cap.

    Attributes:
        cap: the cap that was hit.
    """

    def __init__(self, message, cap):
        super().__init__(message)
        self.cap = cap


class DomainError(PantsLabError, ValueError):
    """A numeric evaluator was called outside its domain."""


class InvariantError(PantsLabError):
    """An algorithm left a state that breaks one of its own guarantees."""
