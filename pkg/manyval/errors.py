from typing import List, Optional, Sequence


class ManyvalError(Exception):
    """Base class for every error raised by manyval."""


# ---------- matrices ----------

class MatrixError(ManyvalError, ValueError):
    pass


class UnknownOperationError(MatrixError):
    pass


class ArityMismatchError(MatrixError):
    pass


class ForeignValueError(MatrixError):
    pass


class SignatureMismatchError(MatrixError):
    pass


class ForeignPartitionError(MatrixError):
    pass


class UnknownMatrixError(ManyvalError, LookupError):
    pass


# ---------- sources ----------

class SourceError(ManyvalError, ValueError):
    """
    Syntax error in a spec file, formula or partition literal.
    line/column are 1-based and point into the offending input.
    """

    def __init__(self, line: int, column: int, message: str, expected: Sequence[str] = ()):
        self.line = line
        self.column = column
        self.message = message
        self.expected = list(expected)
        super().__init__(f"{line}:{column}: {message}")


class LogicSpecError(SourceError):
    """Semantic errors of a parsed spec; `issues` holds (line, column, message) triples."""

    def __init__(self, issues: List[tuple]):
        self.issues = list(issues)
        line, column, message = self.issues[0]
        if len(self.issues) > 1:
            message = f"{message} (and {len(self.issues) - 1} more)"
        super().__init__(line, column, message)

    @property
    def messages(self) -> List[str]:
        return [msg for _, _, msg in self.issues]


# ---------- algebra / semantics / tableaux ----------

class UnverifiedCongruenceError(ManyvalError, ValueError):
    pass


class StatsDomainError(ManyvalError, ValueError):
    pass


class NotAciError(ManyvalError, ValueError):
    pass


class AtomCapExceededError(ManyvalError, ValueError):
    pass


class MissingAtomError(ManyvalError, ValueError):
    pass


class TableauError(ManyvalError, ValueError):
    pass


class BudgetExhaustedError(ManyvalError, RuntimeError):
    """
    A search ran out of wall-clock time or nodes. `partial` holds whatever was
    found before the budget ran out; it is never a complete answer.
    """

    def __init__(self, reason: str, message: str, partial: Optional[list] = None):
        self.reason = reason
        self.partial = list(partial) if partial is not None else []
        super().__init__(message)
