"""Error types shared across the workbench.

Every error carries a stable ``code`` (machine-readable, used by the CLI and
the HTTP service) and, where it makes sense, the offending cell address.
"""

from __future__ import annotations


class SheetCspError(Exception):
    """Base class: message plus stable code plus optional offending cell."""

    code = "ERROR"

    def __init__(self, message: str, *, cell=None, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code
        self.cell = cell

    @property
    def message(self) -> str:
        return str(self)


class AddressError(SheetCspError):
    code = "BAD_ADDRESS"


class RangeSpecError(SheetCspError):
    code = "BAD_RANGE"


class SheetError(SheetCspError):
    code = "BAD_SHEET"


class SnapshotMismatch(SheetCspError):
    code = "SNAPSHOT_MISMATCH"


class ParseError(SheetCspError):
    code = "PARSE_ERROR"


class MatrixRequired(ParseError):
    code = "MATRIX_REQUIRED"


class CompileError(SheetCspError):
    code = "COMPILE_ERROR"


class MissingVarRanges(CompileError):
    code = "MISSING_VAR_RANGES"


class MissingConstraintRanges(CompileError):
    code = "MISSING_CONSTRAINT_RANGES"


class DuplicateMarker(CompileError):
    code = "DUPLICATE_MARKER"


class UnboundedVariable(CompileError):
    code = "UNBOUNDED_VARIABLE"


class MultipleObjectives(CompileError):
    code = "MULTIPLE_OBJECTIVES"


class PairLengthMismatch(CompileError):
    code = "PAIR_LENGTH_MISMATCH"


class ObjectiveNotSingleCell(CompileError):
    code = "OBJECTIVE_NOT_SINGLE_CELL"


class NonIntegerConstantCell(CompileError):
    code = "NON_INTEGER_CONSTANT_CELL"


class UnknownCell(CompileError):
    code = "UNKNOWN_CELL"


class DomainOnConstant(CompileError):
    code = "DOMAIN_ON_CONSTANT"


class NodeLimitExceeded(SheetCspError):
    code = "NODE_LIMIT_EXCEEDED"


class SolveCancelled(SheetCspError):
    code = "CANCELLED"


class NoSolutions(SheetCspError):
    code = "NO_SOLUTIONS"
