"""Exception hierarchy.

Every error raised by the package derives from :class:`RoughFnError`, which
itself is a ``ValueError`` so that callers validating input the usual way
keep working.
"""


class RoughFnError(ValueError):
    """Base class for all package errors."""


class InvalidParameterError(RoughFnError):
    pass


class NonFiniteError(RoughFnError):
    """A sampled value was NaN or infinite."""

    def __init__(self, abscissa, value):
        self.abscissa = abscissa
        self.value = value
        super().__init__(f"non-finite sample {value!r} at x={abscissa!r}")


class DegenerateFitError(RoughFnError):
    pass


class DivergenceError(RoughFnError):
    pass


class ResonanceError(RoughFnError):
    """|a| equals |b|**(1/p); no unique solution is guaranteed."""


class RegimeError(RoughFnError):
    pass


class ContractViolationError(RoughFnError):
    pass


class UnsupportedFunctionError(RoughFnError):
    pass


class InputError(RoughFnError):
    """Malformed external input (CSV files, CLI specs)."""
