"""Exception hierarchy shared by every gaplab module."""


class GaplabError(Exception):
    """Base class for all gaplab errors."""


class DomainError(GaplabError, ValueError):
    """An argument lies outside the range where a formula or lemma applies."""


class CeilingExceeded(GaplabError):
    """A sieve or primality ceiling would be exceeded."""


class ParseError(GaplabError):
    def __init__(self, line_no: int, line: str, reason: str = "not a decimal ordinate"):
        self.line_no = line_no
        self.line = line
        super().__init__(f"line {line_no}: {reason}: {line!r}")


class OrderError(GaplabError):
    """Zero ordinates are not strictly ascending."""


class HeightExceeded(GaplabError):
    """A query height lies above the last ordinate of a zero table."""


class NearZeroOrdinate(GaplabError):
    """Truncation height T sits on (or numerically next to) a zero ordinate."""


class NoSolution(GaplabError):
    """An equation has no solution in the admissible range."""


class NoThreshold(GaplabError):
    """An inequality margin has no sign change in the search bracket."""
