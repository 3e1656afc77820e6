"""Kraus-Cirac canonical form of two-qubit unitaries.

Any 4x4 unitary U factors as

    U = g * (uA x uB) * exp[i (ax XX + ay YY + az ZZ)] * (vA x vB)

with single-qubit special unitaries uA, uB, vA, vB, a unit-modulus global
phase g, and interaction coefficients (ax, ay, az) made unique by restricting
them to the Weyl chamber.  This module computes the factorization, reports
the number of nonzero coefficients (the KC number), classifies the gate by
that count, and provides the Makhlin invariants as an independent
local-equivalence check.
"""

import enum
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import KcforgeError, NotUnitaryError, NumericalDegeneracyError
from .gates import ID2, PAULI_X, PAULI_Y, PAULI_Z, PAULIS, canonical_exponential
from .linalg import DEFAULT_ATOL

# Angles whose magnitude stays below this are treated as exact zeros when
# counting interaction coefficients.  Looser than DEFAULT_ATOL because angle
# extraction loses roughly two digits relative to matrix residuals.
KC_ZERO_ATOL = 1e-7

# Bell-like change of basis.  Its defining property (tested in the suite):
# conjugation by MAGIC carries kron(a, b) with a, b in SU(2) to a real
# orthogonal matrix, and carries canonical exponentials to diagonal form.
MAGIC = np.array(
    [[1, 0, 0, 1j], [0, 1j, 1, 0], [0, 1j, -1, 0], [1, 0, 0, -1j]],
    dtype=complex,
) * np.sqrt(0.5)
_MAGIC_DAG = MAGIC.conj().T

# Maps the four diagonal phase angles (in the MAGIC column basis) to the
# global phase angle and the three interaction coefficients.
_ANGLE_MAP = 0.25 * np.array(
    [[1, 1, 1, 1], [1, 1, -1, -1], [-1, 1, -1, 1], [1, -1, -1, 1]]
)

_SQ2 = np.sqrt(0.5)
# Conjugating both qubits by _AXIS_SWAPPERS[(j, k)] exchanges the j and k
# interaction axes and negates the third (which cancels on the doubled axis).
_AXIS_SWAPPERS = {
    (0, 1): (PAULI_X + PAULI_Y) * _SQ2,
    (1, 2): (PAULI_Y + PAULI_Z) * _SQ2,
    (0, 2): (PAULI_X + PAULI_Z) * _SQ2,
}


class GateClass(enum.Enum):
    """Two-qubit gate classes in bijection with the interaction count."""

    LOCAL_UNITARY = "local-unitary"
    CONTROLLED_UNITARY = "controlled-unitary"
    MATCHGATE = "matchgate"
    GENERIC_SU4 = "generic-su4"


_CLASS_BY_COUNT = (
    GateClass.LOCAL_UNITARY,
    GateClass.CONTROLLED_UNITARY,
    GateClass.MATCHGATE,
    GateClass.GENERIC_SU4,
)


@dataclass(frozen=True)
class WeylPoint:
    """Canonical interaction coefficients (radians)."""

    alpha_x: float
    alpha_y: float
    alpha_z: float

    def as_array(self):
        return np.array([self.alpha_x, self.alpha_y, self.alpha_z])

    def __iter__(self):
        return iter((self.alpha_x, self.alpha_y, self.alpha_z))

    def is_canonical(self, atol=KC_ZERO_ATOL):
        """Chamber membership: pi/4 >= ax >= ay >= |az| >= 0, and az >= 0
        on the ax = pi/4 boundary."""
        ax, ay, az = self.alpha_x, self.alpha_y, self.alpha_z
        inside = (
            np.pi / 4 + atol >= ax >= ay - atol
            and ay + atol >= abs(az)
            and ay >= -atol
        )
        if not inside:
            return False
        if ax >= np.pi / 4 - atol and az < -atol:
            return False
        return True


@dataclass(frozen=True)
class KcDecomposition:
    """Local dressings, canonical coefficients, and global phase of a gate."""

    u_a: np.ndarray
    u_b: np.ndarray
    v_a: np.ndarray
    v_b: np.ndarray
    weyl: WeylPoint
    global_phase: complex

    def reconstruct(self):
        """The exact matrix product this decomposition denotes."""
        core = canonical_exponential(*self.weyl)
        return (
            self.global_phase
            * np.kron(self.u_a, self.u_b)
            @ core
            @ np.kron(self.v_a, self.v_b)
        )


def as_two_qubit_unitary(matrix, atol=DEFAULT_ATOL):
    """Validate a 4x4 unitary and return it as a complex ndarray.

    Raises:
        NotUnitaryError: shape is wrong or the unitarity defect exceeds atol.
    """
    m = np.asarray(matrix, dtype=complex)
    if m.shape != (4, 4):
        raise NotUnitaryError(f"expected a 4x4 matrix, got shape {m.shape}")
    linalg.assert_finite(m, "two-qubit gate")
    defect = linalg.frobenius(m @ m.conj().T - np.eye(4))
    if defect > atol:
        raise NotUnitaryError(f"unitarity defect {defect:.3e} exceeds {atol:.1e}")
    return m


def canonicalize(alpha_x, alpha_y, alpha_z, atol=DEFAULT_ATOL):
    """Move a raw interaction triple into the Weyl chamber.

    Returns (weyl, (lA, lB), (rA, rB), phase) such that

        exp[i (ax XX + ay YY + az ZZ)]
            = phase * kron(lA, lB) @ exp[i weyl] @ kron(rA, rB)

    using only axis shifts by pi/2 (extracting Pauli x Pauli factors),
    simultaneous sign flips of two axes (single-sided Pauli conjugation),
    axis exchanges (same Clifford on both qubits), and the reflection that
    fixes the sign of az on the ax = pi/4 boundary.
    """
    v = [float(alpha_x), float(alpha_y), float(alpha_z)]
    if not np.all(np.isfinite(v)):
        raise ValueError("interaction coefficients must be finite")
    state = {
        "phase": 1.0 + 0.0j,
        "lA": ID2.copy(), "lB": ID2.copy(),
        "rA": ID2.copy(), "rB": ID2.copy(),
    }

    def shift(k, steps):
        # exp[i (v_k + steps*pi/2) PP] = i^steps (P^steps x P^steps) exp[i v_k PP];
        # the extracted factor sits between the accumulated left dressing and
        # the exponential, so it right-multiplies the dressing
        v[k] -= steps * np.pi / 2
        state["phase"] *= 1j ** (steps % 4)
        p = np.linalg.matrix_power(PAULIS[k], steps % 4)
        state["lA"] = state["lA"] @ p
        state["lB"] = state["lB"] @ p

    def swap(j, k):
        c = _AXIS_SWAPPERS[(min(j, k), max(j, k))]
        v[j], v[k] = v[k], v[j]
        state["lA"] = state["lA"] @ c.conj().T
        state["lB"] = state["lB"] @ c.conj().T
        state["rA"] = c @ state["rA"]
        state["rB"] = c @ state["rB"]

    def negate(j, k):
        # conjugating qubit A alone by the remaining axis' Pauli flips j and k
        p = PAULIS[3 - j - k]
        v[j] = -v[j]
        v[k] = -v[k]
        state["lA"] = state["lA"] @ p
        state["rA"] = p @ state["rA"]

    for k in range(3):
        # a full 2*pi shift is the identity on phase and dressings alike
        v[k] -= 2 * np.pi * round(v[k] / (2 * np.pi))
        while v[k] <= -np.pi / 4:
            shift(k, -1)
        while v[k] > np.pi / 4:
            shift(k, +1)
    if abs(v[0]) < abs(v[1]):
        swap(0, 1)
    if abs(v[1]) < abs(v[2]):
        swap(1, 2)
    if abs(v[0]) < abs(v[1]):
        swap(0, 1)
    if v[0] < 0:
        negate(0, 2)
    if v[1] < 0:
        negate(1, 2)
    if v[0] > np.pi / 4 - atol and v[2] < -atol:
        shift(0, 1)
        negate(0, 2)

    weyl = WeylPoint(v[0], v[1], v[2])
    return weyl, (state["lA"], state["lB"]), (state["rA"], state["rB"]), state["phase"]


def _decompose_once(u, atol):
    """One pass of the magic-basis Cartan factorization (no retry logic)."""
    um = _MAGIC_DAG @ u @ MAGIC
    s = um.T @ um
    eigenvalues, q = linalg.eig_symmetric_unitary(s, atol)

    half_angles = np.angle(eigenvalues) / 2.0
    d = np.exp(1j * half_angles)
    p = um @ q @ np.diag(1.0 / d)
    if linalg.frobenius(p.imag) > 10 * atol:
        raise NumericalDegeneracyError(
            f"orthogonal factor has imaginary residue {linalg.frobenius(p.imag):.3e}"
        )
    p = p.real.copy()
    # Land both orthogonal factors in SO(4); the first flip keeps p @ diag @ q.T
    # fixed, the second pushes a sign into the diagonal phases instead.
    if np.linalg.det(q) < 0:
        q = q.copy()
        q[:, 0] = -q[:, 0]
        p[:, 0] = -p[:, 0]
    if np.linalg.det(p) < 0:
        p[:, 0] = -p[:, 0]
        d = d.copy()
        d[0] = -d[0]

    left = MAGIC @ p @ _MAGIC_DAG
    right = MAGIC @ q.T @ _MAGIC_DAG
    u_a, u_b, phase_left = linalg.kron_factor_su2(left, 10 * atol)
    v_a, v_b, phase_right = linalg.kron_factor_su2(right, 10 * atol)

    theta, raw_x, raw_y, raw_z = _ANGLE_MAP @ np.angle(d)
    phase = np.exp(1j * theta) * phase_left * phase_right

    weyl, (l_a, l_b), (r_a, r_b), canon_phase = canonicalize(raw_x, raw_y, raw_z, atol)
    u_a, u_b = u_a @ l_a, u_b @ l_b
    v_a, v_b = r_a @ v_a, r_b @ v_b
    phase = phase * canon_phase

    locals_su2 = []
    for m in (u_a, u_b, v_a, v_b):
        det_root = np.sqrt(np.linalg.det(m))
        locals_su2.append(m / det_root)
        phase = phase * det_root
    u_a, u_b, v_a, v_b = locals_su2
    phase = phase / abs(phase)

    return KcDecomposition(u_a, u_b, v_a, v_b, weyl, complex(phase))


def decompose(matrix, atol=DEFAULT_ATOL):
    """Compute the canonical decomposition of a two-qubit unitary.

    The gate is conjugated into the magic basis, where the symmetric unitary
    Um.T @ Um is jointly diagonalized over a real orthogonal basis; the
    orthogonal factors become the local dressings and the diagonal phases the
    interaction coefficients, which are then folded into the Weyl chamber.

    Degenerate spectra occasionally leave the joint diagonalization without a
    usable basis; in that case the gate is re-conjugated by random local
    unitaries (which leaves the Weyl point unchanged) and the pass is retried.

    Args:
        matrix: 4x4 unitary (array-like).
        atol: Absolute tolerance; the reconstruction residual is held to
            10*atol.

    Returns:
        KcDecomposition whose reconstruct() reproduces the input.

    Raises:
        NotUnitaryError: the input fails validation.
        NumericalDegeneracyError: every retry failed its residual target.
    """
    u = as_two_qubit_unitary(matrix, atol)

    last_error = None
    for attempt in range(6):
        if attempt == 0:
            candidate, pre_a, pre_b = u, None, None
        else:
            rng = np.random.default_rng(0x5EED + attempt)
            pre_a = _haar_su2(rng)
            pre_b = _haar_su2(rng)
            candidate = np.kron(pre_a, pre_b) @ u
        try:
            dec = _decompose_once(candidate, atol)
        except KcforgeError as exc:
            last_error = exc
            continue
        if attempt:
            dec = KcDecomposition(
                pre_a.conj().T @ dec.u_a,
                pre_b.conj().T @ dec.u_b,
                dec.v_a,
                dec.v_b,
                dec.weyl,
                dec.global_phase,
            )
            dec = _renormalize_locals(dec)
        residual = linalg.frobenius(dec.reconstruct() - u)
        if residual <= 10 * atol:
            return dec
        last_error = NumericalDegeneracyError(
            f"reconstruction residual {residual:.3e} exceeds {10 * atol:.1e}"
        )
    raise NumericalDegeneracyError(
        f"decomposition failed after randomized retries: {last_error}"
    )


def _haar_su2(rng):
    z = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    q, r = np.linalg.qr(z)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    return q / np.sqrt(np.linalg.det(q))


def _renormalize_locals(dec):
    phase = dec.global_phase
    mats = []
    for m in (dec.u_a, dec.u_b, dec.v_a, dec.v_b):
        det_root = np.sqrt(np.linalg.det(m))
        mats.append(m / det_root)
        phase = phase * det_root
    phase = phase / abs(phase)
    return KcDecomposition(*mats, dec.weyl, complex(phase))


def reconstruct(decomposition):
    """Assemble the unitary denoted by a decomposition (see KcDecomposition)."""
    return decomposition.reconstruct()


def kc_number(decomposition_or_weyl, zero_atol=KC_ZERO_ATOL):
    """Count the interaction coefficients exceeding zero_atol in magnitude."""
    weyl = getattr(decomposition_or_weyl, "weyl", decomposition_or_weyl)
    return int(np.sum(np.abs(np.asarray(tuple(weyl))) > zero_atol))


def classify(decomposition, zero_atol=KC_ZERO_ATOL):
    """Gate class implied by the interaction count: 0 -> local unitary,
    1 -> controlled-unitary, 2 -> matchgate, 3 -> generic SU(4)."""
    return _CLASS_BY_COUNT[kc_number(decomposition, zero_atol)]


def makhlin_invariants(matrix, atol=DEFAULT_ATOL):
    """Local-unitary invariants (G1 complex, G2 real) of a two-qubit gate.

    Computed from the magic-basis Gram matrix; invariant under
    (a x b) @ U @ (c x d) for any single-qubit unitaries, so two gates with
    equal invariants are locally equivalent.  Reference values:
    identity -> (1, 3), CNOT -> (0, 1), SWAP -> (-1, -3).
    """
    u = as_two_qubit_unitary(matrix, atol)
    um = _MAGIC_DAG @ u @ MAGIC
    det_um = np.linalg.det(um)
    gram = um.T @ um
    tr2 = np.trace(gram) ** 2
    g1 = tr2 / (16 * det_um)
    g2 = (tr2 - np.trace(gram @ gram)) / (4 * det_um)
    return complex(g1), float(g2.real)


_NAMED_WEYL_POINTS = {
    "identity-class": (0.0, 0.0, 0.0),
    "CNOT-class": (np.pi / 4, 0.0, 0.0),
    "iSWAP-class": (np.pi / 4, np.pi / 4, 0.0),
    "SWAP-class": (np.pi / 4, np.pi / 4, np.pi / 4),
}


def weyl_annotation(weyl, atol=1e-7):
    """Name of a recognized Weyl point, or None."""
    point = np.asarray(tuple(weyl))
    for name, ref in _NAMED_WEYL_POINTS.items():
        if np.max(np.abs(point - np.asarray(ref))) < atol:
            return name
    return None
