class EngineError(Exception):
    """Base class for failures raised by the comparison engine."""


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NotRepresentable(EngineError):
    """A derived sequence falls outside the exponential-periodic class."""


class NonCommensurableGrid(EngineError):
    pass


class ScheduleMismatch(EngineError):
    pass


class NotBijective(EngineError):
    def __init__(self, witness: str):
        self.witness = witness
        super().__init__(f"schedule is not a bijection: {witness}")


class NoCommonUniverse(EngineError):
    pass


class NotApplicable(EngineError):
    pass


class Discrepancy(EngineError):
    """Symbolic analysis disagrees with brute-force evaluation."""
