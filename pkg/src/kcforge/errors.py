"""Exception types raised by the analysis and synthesis routines."""


class KcforgeError(Exception):
    """Base class for all package-specific errors."""


class NotUnitaryError(KcforgeError, ValueError):
    """A matrix expected to be unitary is not, within tolerance."""


class NotSymmetricError(KcforgeError, ValueError):
    """A matrix expected to be (complex) symmetric is not, within tolerance."""


class NotProductFormError(KcforgeError, ValueError):
    """A 4x4 matrix is not a Kronecker product of 2x2 factors."""


class ConvergenceError(KcforgeError, ArithmeticError):
    """A matrix factorization failed to reach its residual target."""


class NumericalDegeneracyError(KcforgeError, ArithmeticError):
    """Canonical decomposition failed even after randomized re-conjugation."""


class DegenerateCountError(KcforgeError, ArithmeticError):
    """A coefficient count landed on a value that is analytically impossible."""


class InvalidBasisError(KcforgeError, ValueError):
    """A measurement basis is not orthonormal within tolerance."""


class InconsistentCriteriaError(KcforgeError, ArithmeticError):
    """Two equivalent-by-theory checks disagreed beyond tolerance."""


class RankDetectionAmbiguousError(KcforgeError, ValueError):
    """A Schmidt coefficient sits too close to zero to decide the rank."""


class NotInvertibleError(KcforgeError, ValueError):
    """No inversion protocol exists for the gate in the given scenario."""


class SearchFailureError(KcforgeError, ArithmeticError):
    """A numerical search exhausted its budget without meeting its target.

    Attributes:
        best_residual: Smallest residual seen before giving up, or None.
    """

    def __init__(self, message, best_residual=None):
        super().__init__(message)
        self.best_residual = best_residual


class DimensionMismatchError(KcforgeError, ValueError):
    """Operator and state dimensions are incompatible."""


class GateSpecParseError(KcforgeError, ValueError):
    """A textual gate specification could not be parsed.

    Attributes:
        position: 1-based column of the offending character.
    """

    def __init__(self, message, position):
        super().__init__(f"{message} (column {position})")
        self.position = position
