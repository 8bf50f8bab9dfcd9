"""Exception hierarchy shared by all modules."""


class SkosverError(Exception):
    """Base class for every error raised by this package."""


class VocabError(SkosverError):
    """A domain rule was broken while building or changing a vocabulary."""

    kind = "VocabError"

    def __init__(self, message, code=None):
        super().__init__(message)
        self.code = code


class DuplicateCode(VocabError):
    kind = "DuplicateCode"


class InvalidCode(VocabError):
    kind = "InvalidCode"


class UnknownCode(VocabError):
    kind = "UnknownCode"


class SelfHierarchy(VocabError):
    kind = "SelfHierarchy"


class MembershipCycle(VocabError):
    kind = "MembershipCycle"


class ConflictingEvents(VocabError):
    kind = "ConflictingEvents"


class StyleUnrepresentable(VocabError):
    kind = "StyleUnrepresentable"


class UnknownVersion(SkosverError):
    pass


class MalformedTag(SkosverError, ValueError):
    """Raised for language tags outside the supported grammar.

    ``offset`` is the zero-based position in the input where the problem
    was detected.
    """

    def __init__(self, message, offset=0):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class ParseError(SkosverError, ValueError):
    """Raised by the ledger and Turtle readers, with 1-based line/column."""

    def __init__(self, message, line=0, column=0):
        loc = f"line {line}" + (f", column {column}" if column else "")
        super().__init__(f"{loc}: {message}")
        self.line = line
        self.column = column
