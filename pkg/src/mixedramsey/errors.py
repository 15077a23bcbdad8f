"""Exception hierarchy shared by every module."""


class RamseyToolkitError(Exception):
    """Base class for all toolkit errors."""


class PreconditionError(RamseyToolkitError, ValueError):
    """The hypothesis of a constructive lemma does not hold for the input."""


class ParameterError(PreconditionError):
    """A numeric parameter lies outside its admissible range."""


class ParityError(ParameterError):
    """A length or target has the wrong parity for the requested object."""


class SizeCapError(RamseyToolkitError):
    """Exhaustive mode was requested on an instance above its size cap."""


class BudgetExceeded(RamseyToolkitError):
    """A search ran out of its node (or vertex) budget before deciding."""

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = dict(stats or {})


class VerificationFailed(RamseyToolkitError, AssertionError):
    """A produced object failed independent re-verification (an internal bug)."""


class EdgeBoundViolation(RamseyToolkitError):
    """A decomposition satisfied the structural clauses but not the edge bound."""


class GraphFormatError(RamseyToolkitError, ValueError):
    """Base class for parse errors of the text graph / partition formats."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class HeaderError(GraphFormatError):
    pass


class VertexRangeError(GraphFormatError):
    pass


class LoopError(GraphFormatError):
    pass


class DuplicatePairError(GraphFormatError):
    pass


class EmptyColourError(GraphFormatError):
    pass


class ColourStringError(GraphFormatError):
    pass
