"""Exception hierarchy.

Every error raised by the library derives from :class:`PolyInfixError`.
The ``kind`` class attribute is the stable short name used in reports and
JSON output.
"""


class PolyInfixError(Exception):
    kind = "Error"


class TableError(PolyInfixError):
    kind = "BadTable"


class TermError(PolyInfixError):
    """A term is not well-formed against its operator table."""

    kind = "IllFormed"


# rewrite

class RewriteError(PolyInfixError):
    kind = "RewriteError"


class BadPath(RewriteError):
    kind = "BadPath"


class BadSpan(RewriteError):
    kind = "BadSpan"


class NotPoly(RewriteError):
    kind = "NotPoly"


class ArityTooSmall(RewriteError):
    kind = "ArityTooSmall"


class NoRedex(RewriteError):
    kind = "NoRedex"


class SpanTooSmall(RewriteError):
    kind = "SpanTooSmall"


class SpanFull(RewriteError):
    kind = "SpanFull"


class NotFlat(RewriteError):
    kind = "NotFlat"


class TooLarge(RewriteError):
    kind = "TooLarge"


# proof checking

class NoMatch(RewriteError):
    kind = "NoMatch"


class UnknownHypothesis(RewriteError):
    kind = "UnknownHypothesis"


class ScriptError(PolyInfixError):
    """A proof script could not be read."""

    kind = "ScriptError"

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


# evaluation

class EvalError(PolyInfixError):
    kind = "EvalError"


class UnboundVariable(EvalError):
    kind = "UnboundVariable"


class KernelMismatch(EvalError):
    kind = "KernelMismatch"


class DimensionMismatch(EvalError):
    kind = "DimensionMismatch"


class NotAssociative(EvalError):
    kind = "NotAssociative"


class NotNumeral(EvalError):
    kind = "NotNumeral"
