"""Exception types shared across the package."""


class AcqtimeError(Exception):
    """Base class for all package-specific errors."""


class DisconnectedGraph(AcqtimeError):
    """Operation requires a connected graph."""


class TooLarge(AcqtimeError):
    """Instance exceeds the hard size cap of an exact solver."""


class IllegalMatching(AcqtimeError):
    """A round is not a legal matching of the ambient graph.

    ``kind`` is ``"non_edge"`` (a swapped pair is not an edge) or
    ``"overlap"`` (two swaps share a vertex).  ``round_index`` is the
    1-based index of the offending round when raised during replay.
    """

    def __init__(self, kind: str, round_index: int | None = None):
        self.kind = kind
        self.round_index = round_index
        where = "" if round_index is None else f" in round {round_index}"
        super().__init__(f"illegal matching ({kind}){where}")


class NotABijection(AcqtimeError):
    """A placement round is not a bijection on the vertex set."""

    def __init__(self, round_index: int | None = None):
        self.round_index = round_index
        where = "" if round_index is None else f" in round {round_index}"
        super().__init__(f"placement is not a bijection{where}")


class NoHamiltonianPath(AcqtimeError):
    """The Hamiltonian path search exhausted its budget."""


class SizeMismatch(AcqtimeError):
    """Routing requires source and target sets of equal size."""


class ZeroEdges(AcqtimeError):
    """Bound is undefined for an edgeless graph."""


class DegenerateP(AcqtimeError):
    """Edge probability must lie strictly between 0 and 1."""


class PBelowThreshold(AcqtimeError):
    """p is too small for the two-round exposure split to exist."""
