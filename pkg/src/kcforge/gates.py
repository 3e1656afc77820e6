"""Gate matrices and parametric gate constructors.

Conventions used throughout the package: two-qubit basis order is
|00>, |01>, |10>, |11> with the first tensor factor being qubit A,
and all angles are in radians.
"""

import numpy as np

ID2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
PHASE_S = np.diag([1, 1j]).astype(complex)

CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
# Control on qubit B, target on qubit A.
CNOT_BA = np.array(
    [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=complex
)
CZ = np.diag([1, 1, 1, -1]).astype(complex)
SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)
ISWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1j, 0], [0, 1j, 0, 0], [0, 0, 0, 1]], dtype=complex
)

KET_0 = np.array([1, 0], dtype=complex)
KET_1 = np.array([0, 1], dtype=complex)
KET_PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)
KET_MINUS = np.array([1, -1], dtype=complex) / np.sqrt(2)


def controlled_phase(theta):
    """diag(1, 1, 1, e^{i theta}): phase on |11>, control/target symmetric."""
    return np.diag([1, 1, 1, np.exp(1j * theta)]).astype(complex)


def rx(theta):
    """Rotation exp(-i theta X / 2)."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def ry(theta):
    """Rotation exp(-i theta Y / 2)."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz(theta):
    """Rotation exp(-i theta Z / 2)."""
    return np.diag([np.exp(-1j * theta / 2), np.exp(1j * theta / 2)])


def phase_z(alpha):
    """exp(i alpha Z) = diag(e^{i alpha}, e^{-i alpha})."""
    return np.diag([np.exp(1j * alpha), np.exp(-1j * alpha)])


def canonical_exponential(alpha_x, alpha_y, alpha_z):
    """exp[i (ax XX + ay YY + az ZZ)] as a product of its commuting factors.

    Each factor is cos(a) I + i sin(a) (P x P), so the result is exact up to
    floating-point rounding; no general matrix exponential is involved.
    """
    out = np.eye(4, dtype=complex)
    for angle, pauli in zip((alpha_x, alpha_y, alpha_z), PAULIS):
        pp = np.kron(pauli, pauli)
        out = out @ (np.cos(angle) * np.eye(4) + 1j * np.sin(angle) * pp)
    return out


def bloch_state(theta, phi):
    """Qubit state cos(theta/2)|0> + e^{i phi} sin(theta/2)|1> as a vector."""
    return np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])
