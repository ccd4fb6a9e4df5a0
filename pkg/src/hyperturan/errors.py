class InputError(ValueError):
    """Raised for malformed or out-of-range inputs (CLI exit code 2)."""


class UndefinedValueError(ArithmeticError):
    """A quantity is undefined for this instance, e.g. delta(G, tau) with e(G) = 0."""


class CapExceeded(RuntimeError):
    """An enumeration or search budget was exhausted (CLI exit code 3)."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class NoProgress(RuntimeError):
    """A refinement step could not shrink an oversized container."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
