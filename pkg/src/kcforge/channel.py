"""The single-qubit channel induced on A by feeding a fixed state through B.

For a two-qubit unitary U and ancilla state phi on B,

    Gamma(rho) = Tr_B[ U (rho x phi) U^dag ]

is a qubit CPTP map with Kraus operators K_r = <m_r|_B U |phi>_B for any
orthonormal measurement basis {m_r} on B.  By the quantum Birkhoff theorem a
qubit channel is a random-unitary mixture exactly when it is unital
(Gamma(I) = I), and an ancilla making Gamma unital exists exactly when the
gate's interaction count is at most 2.  Gamma(I) has a closed form in the
canonical coefficients which is verified against the brute-force partial
trace throughout the test suite.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InconsistentCriteriaError, InvalidBasisError
from .gates import KET_0, KET_PLUS
from .kak import KC_ZERO_ATOL, as_two_qubit_unitary, decompose, kc_number
from .linalg import DEFAULT_ATOL, frobenius


@dataclass(frozen=True)
class QubitState:
    """Pure qubit state a|0> + b|1>, normalized."""

    a: complex
    b: complex

    def __post_init__(self):
        norm = abs(self.a) ** 2 + abs(self.b) ** 2
        if not math.isfinite(norm) or abs(norm - 1.0) > 1e-9:
            raise ValueError(f"state norm^2 = {norm} is not 1")

    @classmethod
    def from_vector(cls, v):
        v = np.asarray(v, dtype=complex)
        v = v / np.linalg.norm(v)
        return cls(complex(v[0]), complex(v[1]))

    @classmethod
    def zero(cls):
        return cls(1.0, 0.0)

    @classmethod
    def plus(cls):
        return cls(math.sqrt(0.5), math.sqrt(0.5))

    @property
    def vector(self):
        return np.array([self.a, self.b], dtype=complex)

    @property
    def density(self):
        v = self.vector
        return np.outer(v, v.conj())


@dataclass(frozen=True)
class InducedChannel:
    """Kraus representation of the induced qubit channel."""

    kraus: tuple

    def completeness_defect(self):
        total = sum(k.conj().T @ k for k in self.kraus)
        return frobenius(total - np.eye(2))

    def apply(self, rho):
        rho = np.asarray(rho, dtype=complex)
        return sum(k @ rho @ k.conj().T for k in self.kraus)


@dataclass(frozen=True)
class UnitalityMatrix:
    """Gamma(I) for a qubit channel: Hermitian with trace 2."""

    g11: float
    g12: complex
    g22: float

    @property
    def matrix(self):
        return np.array(
            [[self.g11, self.g12], [np.conj(self.g12), self.g22]], dtype=complex
        )

    def defect(self):
        """Operator-norm distance of Gamma(I) from the identity."""
        d = 0.5 * (self.g11 - self.g22)
        off = abs(self.g12)
        center = 0.5 * (self.g11 + self.g22) - 1.0
        return float(abs(center) + math.hypot(d, off))


def _as_state_vector(phi):
    if isinstance(phi, QubitState):
        return phi.vector
    v = np.asarray(phi, dtype=complex)
    if v.shape != (2,):
        raise ValueError(f"expected a qubit state vector, got shape {v.shape}")
    if abs(np.linalg.norm(v) - 1.0) > 1e-9:
        raise ValueError("qubit state vector is not normalized")
    return v


def induced_kraus(matrix, phi, basis=None, atol=DEFAULT_ATOL):
    """Kraus operators K_r = <m_r|_B U |phi>_B of the induced channel.

    Args:
        matrix: two-qubit unitary.
        phi: ancilla state on B (QubitState or length-2 vector).
        basis: pair of orthonormal measurement vectors on B; defaults to the
            computational basis.
        atol: tolerance for the orthonormality and unitarity checks.

    Raises:
        InvalidBasisError: the measurement vectors are not orthonormal.
    """
    u = as_two_qubit_unitary(matrix, atol)
    phi_vec = _as_state_vector(phi)
    if basis is None:
        basis = (np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex))
    m = np.asarray(basis, dtype=complex)
    if m.shape != (2, 2) or frobenius(m @ m.conj().T - np.eye(2)) > atol:
        raise InvalidBasisError("measurement basis is not an orthonormal pair")

    # u as a tensor [a_out, b_out, a_in, b_in]
    ut = u.reshape(2, 2, 2, 2)
    kraus = tuple(
        np.einsum("k,ikjl,l->ij", m[r].conj(), ut, phi_vec) for r in range(2)
    )
    return InducedChannel(kraus)


def unitality_matrix_closed_form(weyl, phi):
    """Gamma(I) for a canonical gate (trivial dressings) in closed form.

    With s_k = sin(2 alpha_k) and ancilla a|0> + b|1>:

        g11 = 1 + (|a|^2 - |b|^2) s_x s_y
        g22 = 2 - g11
        g12 = (b conj(a) (s_y - s_x) + a conj(b) (s_x + s_y)) s_z
    """
    ax, ay, az = tuple(weyl)
    a, b = _as_state_vector(phi)
    sx, sy, sz = np.sin(2 * ax), np.sin(2 * ay), np.sin(2 * az)
    bias = (abs(a) ** 2 - abs(b) ** 2) * sx * sy
    g12 = (b * np.conj(a) * (sy - sx) + a * np.conj(b) * (sx + sy)) * sz
    return UnitalityMatrix(float(1 + bias), complex(g12), float(1 - bias))


def unitality_matrix_brute(matrix, phi, atol=DEFAULT_ATOL):
    """Gamma(I) by explicit 4x4 construction and partial trace over B."""
    u = as_two_qubit_unitary(matrix, atol)
    phi_vec = _as_state_vector(phi)
    rho_in = np.kron(np.eye(2, dtype=complex), np.outer(phi_vec, phi_vec.conj()))
    rho_out = (u @ rho_in @ u.conj().T).reshape(2, 2, 2, 2)
    g = np.einsum("ikjk->ij", rho_out)
    g12 = 0.5 * (g[0, 1] + np.conj(g[1, 0]))
    return UnitalityMatrix(float(g[0, 0].real), complex(g12), float(g[1, 1].real))


def exists_unital_input(matrix, atol=DEFAULT_ATOL, zero_atol=KC_ZERO_ATOL):
    """Decide whether some ancilla makes the induced channel unital.

    Such an ancilla exists iff the interaction count is at most 2.  In the
    canonical chamber that forces alpha_z = 0, for which the unbiased state
    (|0> + |1>)/sqrt(2) is a closed-form witness; for a dressed gate the
    witness is pulled back through the right B-side local factor.

    Returns:
        (decision, witness) with witness a QubitState or None.
    """
    dec = decompose(matrix, atol)
    count = kc_number(dec, zero_atol)
    if count > 2:
        return False, None
    if count == 0:
        # any ancilla works for a product gate; |0> by convention
        return True, QubitState.from_vector(KET_0)
    witness = dec.v_b.conj().T @ KET_PLUS
    return True, QubitState.from_vector(witness)


def is_random_unitary_channel(channel, atol=DEFAULT_ATOL):
    """Whether the channel is a probabilistic mixture of unitaries.

    Runs two criteria that must agree for channels induced through a qubit
    environment: every nonzero Kraus operator is proportional to a unitary,
    and the channel is unital.  Disagreement is reported, not resolved,
    since it signals either a bug or a Kraus representation drawn from a
    basis in which the criteria legitimately differ.

    Raises:
        InconsistentCriteriaError: the two criteria disagree beyond atol.
    """
    if channel.completeness_defect() > 10 * atol:
        raise ValueError("channel is not trace-preserving")

    proportional = True
    for k in channel.kraus:
        weight2 = np.trace(k.conj().T @ k).real / 2.0
        if weight2 <= atol:
            continue
        if frobenius(k.conj().T @ k - weight2 * np.eye(2)) > 10 * atol:
            proportional = False
            break

    gram = sum(k @ k.conj().T for k in channel.kraus)
    unital = frobenius(gram - np.eye(2)) <= 10 * atol

    if proportional != unital:
        raise InconsistentCriteriaError(
            f"proportional-to-unitary says {proportional}, unitality says {unital}"
        )
    return proportional


def min_unitality_defect(matrix, grid_size=64, refine_steps=20, atol=DEFAULT_ATOL):
    """Minimum of ||Gamma(I) - I|| over all ancilla states, numerically.

    The defect is invariant under the gate's local dressings, so the closed
    form for the canonical core is scanned over a Bloch-sphere grid and the
    best cell is polished by coordinate descent.

    Returns:
        (defect, QubitState attaining it), with the state given in the frame
        of the original (dressed) gate.
    """
    dec = decompose(matrix, atol)
    ax, ay, az = tuple(dec.weyl)
    sx, sy, sz = np.sin(2 * ax), np.sin(2 * ay), np.sin(2 * az)

    def defect(theta, phi):
        a = np.cos(theta / 2)
        b = np.exp(1j * phi) * np.sin(theta / 2)
        bias = (abs(a) ** 2 - abs(b) ** 2) * sx * sy
        g12 = (b * np.conj(a) * (sy - sx) + a * np.conj(b) * (sx + sy)) * sz
        return math.hypot(abs(bias), abs(g12))

    thetas = (np.arange(grid_size) + 0.5) / grid_size * np.pi
    phis = np.arange(grid_size) / grid_size * 2 * np.pi
    tg, pg = np.meshgrid(thetas, phis, indexing="ij")
    a = np.cos(tg / 2)
    b = np.exp(1j * pg) * np.sin(tg / 2)
    bias = (np.abs(a) ** 2 - np.abs(b) ** 2) * sx * sy
    g12 = (b * np.conj(a) * (sy - sx) + a * np.conj(b) * (sx + sy)) * sz
    values = np.hypot(np.abs(bias), np.abs(g12))
    flat = int(np.argmin(values))
    best = (float(tg.flat[flat]), float(pg.flat[flat]))
    best_value = float(values.flat[flat])

    step = np.pi / grid_size
    for _ in range(refine_steps):
        improved = False
        for axis in (0, 1):
            for sign in (+1, -1):
                trial = list(best)
                trial[axis] += sign * step
                value = defect(*trial)
                if value < best_value:
                    best_value, best = value, tuple(trial)
                    improved = True
        if not improved:
            step *= 0.5

    core_state = np.array(
        [np.cos(best[0] / 2), np.exp(1j * best[1]) * np.sin(best[0] / 2)]
    )
    witness = dec.v_b.conj().T @ core_state
    return best_value, QubitState.from_vector(witness)
