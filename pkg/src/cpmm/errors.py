"""Exception hierarchy shared by all subpackages."""


class CPMMError(Exception):
    """Base class for every error raised by this package."""


class IndeterminateForm(CPMMError, ArithmeticError):
    """An operation on extended reals has no well-defined value (inf - inf, 0 * inf)."""


class SpecSyntaxError(CPMMError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class ValidationError(CPMMError):
    """A parsed map spec violates a structural invariant.

    ``kind`` is one of ``overlap``, ``order``, ``non-markov``, ``branch``,
    ``continuity``, ``rules``, ``fixed``, ``range``.
    """

    def __init__(self, kind, message):
        self.kind = kind
        super().__init__(f"{kind}: {message}")


class UndefinedAtPartitionPoint(CPMMError):
    pass


class DomainError(CPMMError, ValueError):
    pass


class TailNotSummable(CPMMError):
    pass


class TailDivergence(CPMMError):
    pass


class NonConvergence(CPMMError):
    pass


class InconclusiveError(CPMMError):
    pass


class UnboundedDrift(CPMMError):
    pass


class InsufficientData(CPMMError):
    pass


class NoBracket(CPMMError):
    pass


class DepthExplosion(CPMMError):
    pass


class InsufficientGrid(CPMMError):
    pass


class CapabilityError(CPMMError):
    """No solver strategy is available for the requested spec or parameter."""
