"""Exception hierarchy shared by every module."""


class PolytorsionError(ValueError):
    """Base class; ``kind`` is the machine-readable tag the CLI emits."""

    kind = "error"


class DomainError(PolytorsionError):
    kind = "domain_error"


class UnboundedDualError(DomainError):
    kind = "unbounded_dual"


class UnsupportedRankError(DomainError):
    kind = "unsupported_rank"


class NotAcyclicError(DomainError):
    kind = "not_acyclic"


class CommutativeImageError(DomainError):
    """The projection to the free abelian quotient kills an element we need."""

    kind = "commutative_image_insufficient"


class ParseError(PolytorsionError):
    kind = "parse_error"

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
