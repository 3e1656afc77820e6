"""Dense complex matrix substrate for the 2x2/4x4 operators used everywhere.

Arithmetic is delegated to numpy; this module adds the validated predicates
and the small structured factorizations (joint diagonalization of a symmetric
unitary, Kronecker factor extraction, SVD with error mapping) that the
canonical-form pipeline is built on.
"""

import numpy as np

from .errors import ConvergenceError, NotProductFormError, NotSymmetricError, NotUnitaryError

DEFAULT_ATOL = 1e-9

# Thresholds tried, in order, when grouping eigenvalues of Re(S) into
# degenerate clusters.  The first grouping whose joint diagonalization
# meets the residual target wins.
_CLUSTER_LADDER = (1e-7, 1e-5, 1e-9, 1e-3)


def frobenius(m):
    """Frobenius norm."""
    return float(np.linalg.norm(m))


def assert_finite(m, name="matrix"):
    """Raise ValueError if any entry is NaN or infinite."""
    m = np.asarray(m)
    if not (np.all(np.isfinite(m.real)) and np.all(np.isfinite(m.imag))):
        raise ValueError(f"{name} contains non-finite entries")


def is_unitary(m, atol=DEFAULT_ATOL):
    m = np.asarray(m)
    return frobenius(m @ m.conj().T - np.eye(m.shape[0])) <= atol


def is_symmetric(m, atol=DEFAULT_ATOL):
    m = np.asarray(m)
    return frobenius(m - m.T) <= atol


def is_hermitian(m, atol=DEFAULT_ATOL):
    m = np.asarray(m)
    return frobenius(m - m.conj().T) <= atol


def dagger(m):
    return np.asarray(m).conj().T


def nearest_unitary(m):
    """Unitary (polar) factor of a square matrix, via SVD."""
    w, _, vh = np.linalg.svd(m)
    return w @ vh


def _joint_diagonalize(s, cluster_atol):
    """Orthogonally diagonalize Re(s) and Im(s) together.

    For a symmetric unitary S the real and imaginary parts are commuting real
    symmetric matrices, so a common real orthogonal eigenbasis exists.  Within
    each (near-)degenerate eigenvalue cluster of Re(S) the basis is rotated to
    also diagonalize Im(S) restricted to that cluster.
    """
    x, y = s.real.copy(), s.imag.copy()
    w, q = np.linalg.eigh(x)
    n = len(w)
    i = 0
    while i < n:
        j = i + 1
        while j < n and w[j] - w[i] < cluster_atol:
            j += 1
        if j - i > 1:
            sub = q[:, i:j]
            _, rot = np.linalg.eigh(sub.T @ y @ sub)
            q[:, i:j] = sub @ rot
        i = j
    return q


def eig_symmetric_unitary(s, atol=DEFAULT_ATOL):
    """Eigendecompose a symmetric unitary matrix over a real orthogonal basis.

    Args:
        s: 4x4 complex matrix, symmetric (s == s.T) and unitary within atol.
        atol: Absolute tolerance for the precondition checks; the outputs are
            validated against 10*atol.

    Returns:
        (eigenvalues, q): unit-modulus eigenvalues (shape (4,)) and a real
        orthogonal matrix q with det(q) = +1 such that q.T @ s @ q is diagonal.

    Raises:
        NotSymmetricError / NotUnitaryError: A precondition fails.
        ConvergenceError: No clustering threshold produced a diagonalizing
            basis within the residual target.
    """
    s = np.asarray(s, dtype=complex)
    assert_finite(s, "symmetric unitary input")
    if not is_symmetric(s, atol):
        raise NotSymmetricError(f"matrix is not symmetric: defect {frobenius(s - s.T):.3e}")
    if not is_unitary(s, atol):
        raise NotUnitaryError(
            f"matrix is not unitary: defect {frobenius(s @ s.conj().T - np.eye(len(s))):.3e}"
        )

    target = 10 * atol
    best = None
    for cluster_atol in _CLUSTER_LADDER:
        q = _joint_diagonalize(s, cluster_atol)
        d = q.T @ s @ q
        resid = frobenius(d - np.diag(np.diag(d)))
        if best is None or resid < best[0]:
            best = (resid, q, np.diag(d).copy())
        if resid <= target:
            break
    resid, q, eigenvalues = best
    if resid > target:
        raise ConvergenceError(f"joint diagonalization residual {resid:.3e} exceeds {target:.1e}")
    if np.linalg.det(q) < 0:
        q = q.copy()
        q[:, 0] = -q[:, 0]
    return eigenvalues, q


def kron_factor_su2(g, atol=DEFAULT_ATOL):
    """Split a product-form 4x4 unitary into phase * kron(a, b).

    The entries of g are reshuffled into the rank-one matrix
    vec(a) vec(b)^T, whose leading SVD factor recovers both tensor factors in
    closed form.  a and b are normalized to determinant one, with the leftover
    scalar returned as a unit-modulus phase.

    Returns:
        (a, b, phase) with ||g - phase * kron(a, b)|| <= 10*atol.

    Raises:
        NotUnitaryError: g is not unitary within atol.
        NotProductFormError: the reshuffled matrix has second singular value
            above atol, i.e. g is not a Kronecker product.
    """
    g = np.asarray(g, dtype=complex)
    assert_finite(g, "product-form input")
    if g.shape != (4, 4):
        raise ValueError(f"expected 4x4 matrix, got {g.shape}")
    if not is_unitary(g, atol):
        raise NotUnitaryError("kron_factor_su2 requires a unitary input")

    reshuffled = g.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    u, sv, vh = np.linalg.svd(reshuffled)
    if sv[1] > atol:
        raise NotProductFormError(f"second reshuffled singular value {sv[1]:.3e} exceeds {atol:.1e}")

    a = (u[:, 0] * np.sqrt(sv[0])).reshape(2, 2)
    b = (vh[0] * np.sqrt(sv[0])).reshape(2, 2)
    a = a / np.sqrt(np.linalg.det(a))
    b = b / np.sqrt(np.linalg.det(b))
    phase = np.trace(np.kron(a, b).conj().T @ g) / 4.0
    phase = phase / abs(phase)
    return a, b, complex(phase)


def svd4(m):
    """SVD of a 4x4 complex matrix with package error mapping.

    Returns:
        (singular_values, u, vh) with m = u @ diag(s) @ vh and s descending.

    Raises:
        ConvergenceError: the underlying SVD iteration failed.
    """
    m = np.asarray(m, dtype=complex)
    assert_finite(m, "svd input")
    try:
        u, sv, vh = np.linalg.svd(m)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"SVD failed to converge: {exc}") from exc
    return sv, u, vh
