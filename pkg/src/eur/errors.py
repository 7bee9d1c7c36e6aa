"""Exception types shared across the package.

``ValidationError`` signals malformed input (bad shapes, labels, file schemas,
parameter ranges).  ``NumericError`` signals a numeric or invariant failure on
structurally valid input (negative eigenvalues beyond tolerance, violated
bound orderings, non-convergence).  The command-line interface maps them to
exit codes 1 and 2, respectively.
"""


class ValidationError(ValueError):
    """Input failed structural or schema validation."""


class NumericError(ArithmeticError):
    """A numeric tolerance or invariant was violated during computation."""
