"""Exception hierarchy and the process exit codes the CLI maps them to."""

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_PRECONDITION = 3
EXIT_INTERNAL = 4


class GraphKmsError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = EXIT_INTERNAL


class InputError(GraphKmsError):
    """Invalid user-supplied data (graph document, beta value, grid, state)."""

    exit_code = EXIT_INPUT


class ParseError(InputError):
    """Graph document could not be parsed; carries line information."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            suffix = f" (line {line})" if column is None else f" (line {line}, column {column})"
            message = message + suffix
        super().__init__(message)


class StrictModeError(InputError):
    """Multiple edges encountered while 0-1 adjacency was requested."""


class PreconditionError(GraphKmsError):
    """A documented operation precondition does not hold for this input."""

    exit_code = EXIT_PRECONDITION


class PhaseError(PreconditionError):
    """beta is on the wrong side of the phase transition for the closed form."""


class ConvergenceError(PreconditionError):
    """An iterative routine exhausted its iteration budget."""


class DimensionError(PreconditionError):
    """Polytope dimension exceeds the combinatorial enumeration guard."""


class SizeError(PreconditionError):
    """Path-space enumeration would exceed the size guard."""


class NonUniqueError(PreconditionError):
    """Perron data is not unique (reducible core); the closed form is withheld."""


class InternalError(GraphKmsError):
    """An internal invariant was violated; indicates a bug, not bad input."""

    exit_code = EXIT_INTERNAL


class StructureError(InternalError):
    """Block structure of the permuted adjacency violates its invariants."""
