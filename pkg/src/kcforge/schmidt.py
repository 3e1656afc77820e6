"""Operator Schmidt decomposition of two-qubit unitaries.

A two-qubit operator expands as U = sum_k s_k A_k x B_k with nonnegative
coefficients s_k and operator sides orthonormal in the Frobenius inner
product Tr(A^dag B).  For a unitary input the coefficients satisfy
sum(s_k^2) = 4, and the number of nonzero coefficients is 1, 2, or 4 --
never 3 -- which doubles as a free numerical sanity check.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCountError
from .kak import KC_ZERO_ATOL, as_two_qubit_unitary
from .linalg import DEFAULT_ATOL


@dataclass(frozen=True)
class OperatorSchmidt:
    """Coefficients (descending) and operator sides of the expansion."""

    coefficients: np.ndarray
    ops_a: tuple
    ops_b: tuple

    def reconstruct(self):
        out = np.zeros((4, 4), dtype=complex)
        for s, a, b in zip(self.coefficients, self.ops_a, self.ops_b):
            out += s * np.kron(a, b)
        return out


def operator_schmidt(matrix, atol=DEFAULT_ATOL):
    """Operator Schmidt decomposition of a two-qubit unitary.

    The gate's entries are reshuffled so the A-side and B-side indices pair
    up, and the SVD of that rank-revealing matrix supplies coefficients and
    orthonormal operator sides.  Reference coefficient values: a x b gives
    (2, 0, 0, 0), CNOT gives (sqrt 2, sqrt 2, 0, 0), SWAP gives (1, 1, 1, 1).
    """
    u = as_two_qubit_unitary(matrix, atol)
    reshuffled = u.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    left, sv, right_h = np.linalg.svd(reshuffled)
    ops_a = tuple(left[:, k].reshape(2, 2) for k in range(4))
    ops_b = tuple(right_h[k].reshape(2, 2) for k in range(4))
    return OperatorSchmidt(sv, ops_a, ops_b)


def _count(coefficients, zero_atol):
    return int(np.sum(coefficients > zero_atol))


def operator_schmidt_number(matrix, zero_atol=KC_ZERO_ATOL, atol=DEFAULT_ATOL):
    """Number of nonzero operator Schmidt coefficients; always 1, 2, or 4.

    A raw count of 3 signals numerical trouble (the value is impossible for
    unitaries), so the count is re-taken at 10x looser and 10x tighter
    thresholds; if those do not agree on a valid value the count is refused.

    Raises:
        DegenerateCountError: the count stays at 3 after threshold snapping.
    """
    coefficients = operator_schmidt(matrix, atol).coefficients
    count = _count(coefficients, zero_atol)
    if count == 3:
        candidates = {
            _count(coefficients, zero_atol * 10),
            _count(coefficients, zero_atol / 10),
        } - {3}
        if len(candidates) == 1:
            count = candidates.pop()
        else:
            raise DegenerateCountError(
                f"operator Schmidt count is 3 for coefficients {coefficients}"
            )
    return count
