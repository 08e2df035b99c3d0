"""Exception types shared across the package."""


class ParseError(ValueError):
    """Malformed complex file: syntax, unknown or duplicate names, bad coefficients."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + loc)


class InvalidComplexError(ValueError):
    """A structurally parsed complex violated the complex invariants."""

    def __init__(self, report):
        self.report = report
        codes = ", ".join(v.code for v in report.violations)
        super().__init__(f"invalid complex: {codes}")


class NotAdmissibleError(ValueError):
    """Total homology is not rank one, concentrated, and torsion free."""


class EndpointCriticalError(ValueError):
    """A restriction window endpoint coincides with a critical value."""


class NonTriangularError(ValueError):
    """A basis-change matrix mixes in points of larger critical value."""


class NonUnitDiagonalError(ValueError):
    """An integer basis-change matrix has a diagonal entry other than +-1."""


class InternalInconsistencyError(RuntimeError):
    """Two routes to the same quantity disagreed; indicates a bug or bad input."""
