"""Exception hierarchy shared across the package."""


class ThlnError(Exception):
    """Base class for all package errors."""


# -- topology -----------------------------------------------------------

class MalformedBase(ThlnError):
    """An 8-node base edge list violates 3-regularity, simplicity, or connectivity."""


class MalformedGraph(ThlnError):
    """A serialized graph document cannot be parsed into a well-formed graph."""


class DimensionMismatch(ThlnError):
    """Two halves of different dimensions cannot be joined."""


class NotABijection(ThlnError):
    """A joining matching fails to map the first half onto the second one-to-one."""


class NoDecomposition(ThlnError):
    """The operation needs a two-half decomposition but the graph is a base graph."""


class UnsupportedDimension(ThlnError):
    """The requested variant is not defined at the requested dimension."""


# -- faults -------------------------------------------------------------

class ForeignFault(ThlnError):
    """A fault set references a node or edge that the host graph does not have."""


class FaultyEndpoint(ThlnError):
    """An endpoint passed to a query is itself faulty (or outside the view)."""


# -- search / embedding -------------------------------------------------

class PreconditionViolated(ThlnError):
    """Caller-supplied inputs are outside the operation's contract."""


class TooLarge(ThlnError):
    """Instance exceeds the hard guard of the exhaustive enumerator."""


class OracleBudgetExhausted(ThlnError):
    """A search gave up before finding or refuting; carries the trace so far."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class InternalContradiction(ThlnError):
    """A choice the construction guarantees to exist was unavailable.

    This always indicates a bug (or an out-of-contract input), never a normal
    failure mode, and is surfaced loudly instead of being retried.
    """


class NoCandidate(InternalContradiction):
    """No consecutive path edge satisfied the cross-edge selection filters."""


class DisjointnessViolated(ThlnError):
    """Spliced segments share a node."""


class AdjacencyViolated(ThlnError):
    """Spliced segments meet at a pair of nodes that are not adjacent."""
