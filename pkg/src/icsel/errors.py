"""Exception types shared across the package.

The CLI maps these onto exit codes: ParseError -> 2, ValidationError -> 3,
DegenerateSupportError -> 4, NumericalError -> 5.
"""


class ParseError(ValueError):
    """Input file could not be parsed."""


class ValidationError(ValueError):
    """Dataset or configuration violates an invariant."""


class DegenerateSupportError(RuntimeError):
    """The maximal-intersection support set is empty; nothing can be fit."""


class NumericalError(RuntimeError):
    """The fit hit an unrecoverable numerical condition."""
