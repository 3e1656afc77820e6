"""Seeded random generators for gates, states, and stratified gate classes."""

import numpy as np

from .gates import canonical_exponential

# Margin keeping stratified canonical angles away from 0 and the pi/4
# chamber boundary, so interaction counts stay tolerance-robust.
ANGLE_MARGIN = 0.05


def haar_unitary(dim, rng):
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_su2(rng):
    """Haar-random single-qubit unitary normalized to determinant one."""
    u = haar_unitary(2, rng)
    return u / np.sqrt(np.linalg.det(u))


def random_qubit_vector(rng):
    """Haar-random normalized qubit state vector."""
    v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    return v / np.linalg.norm(v)


def random_canonical_angles(rng, count, low=ANGLE_MARGIN, high=np.pi / 4 - ANGLE_MARGIN):
    """Canonical-chamber angle triple with exactly `count` nonzero entries.

    The nonzero angles are drawn uniformly from [low, high] and sorted
    descending, which keeps the triple inside the chamber
    pi/4 >= ax >= ay >= |az| >= 0.
    """
    if not 0 <= count <= 3:
        raise ValueError("count must be in 0..3")
    angles = np.zeros(3)
    if count:
        angles[:count] = np.sort(rng.uniform(low, high, count))[::-1]
    return tuple(angles)


def random_gate_in_class(rng, kc, low=ANGLE_MARGIN, high=np.pi / 4 - ANGLE_MARGIN):
    """Random two-qubit unitary with the given interaction count, dressed
    by Haar-random local unitaries and a random global phase."""
    core = canonical_exponential(*random_canonical_angles(rng, kc, low, high))
    left = np.kron(haar_unitary(2, rng), haar_unitary(2, rng))
    right = np.kron(haar_unitary(2, rng), haar_unitary(2, rng))
    phase = np.exp(1j * rng.uniform(0, 2 * np.pi))
    return phase * left @ core @ right


def random_entangled_pair(rng, ref_dim, min_schmidt=0.15):
    """Rank-2 pure state of a qubit and a ref_dim reference, as a (2, ref_dim)
    amplitude matrix with both Schmidt coefficients at least min_schmidt."""
    if ref_dim < 2:
        raise ValueError("rank-2 state needs a reference of dimension >= 2")
    lo, hi = min_schmidt**2, 1 - min_schmidt**2
    p = rng.uniform(lo, hi)
    basis_a = haar_unitary(2, rng)
    ref = haar_unitary(ref_dim, rng)[:, :2]
    amps = np.sqrt(p) * np.outer(basis_a[:, 0], ref[:, 0])
    amps += np.sqrt(1 - p) * np.outer(basis_a[:, 1], ref[:, 1])
    return amps
