"""Controlled-phase factorizations and interaction-count composition bounds.

Every two-qubit unitary is a product of at most three locally dressed
controlled-phase gates, and the minimal number of factors equals its
interaction count.  The construction runs through the diagonal identity

    exp(i t ZZ) = e^{-it} (e^{itZ} x e^{itZ}) C_p(4t)

with the X and Y interaction axes reduced to Z by fixed single-qubit
conjugations.  Composition obeys

    |count(U) - count(V)| <= count(UV) <= count(U) + count(V),

and the count is invariant under taking adjoints; both facts are exercised
empirically by the verification suite.
"""

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .gates import HADAMARD, ID2, PHASE_S, canonical_exponential, controlled_phase, phase_z, ry
from .kak import KC_ZERO_ATOL, as_two_qubit_unitary, decompose, kc_number
from .linalg import DEFAULT_ATOL, dagger

# Single-qubit conjugators g with g Z g^dag equal to X, Y, Z respectively.
_AXIS_FROM_Z = (HADAMARD, PHASE_S @ HADAMARD, ID2)


@dataclass(frozen=True)
class ControlledPhaseFactor:
    """One locally dressed controlled-phase gate."""

    theta: float
    left: tuple
    right: tuple

    def assemble(self):
        return (
            np.kron(*self.left)
            @ controlled_phase(self.theta)
            @ np.kron(*self.right)
        )


@dataclass(frozen=True)
class Factorization:
    """Ordered controlled-phase factors whose product is the target gate.

    The factor count equals the target's interaction count.  For a purely
    local gate there is no factor to absorb the dressings, so they are kept
    in local_a / local_b (identity otherwise).
    """

    factors: tuple
    global_phase: complex
    local_a: np.ndarray = field(default_factory=lambda: ID2.copy())
    local_b: np.ndarray = field(default_factory=lambda: ID2.copy())

    def reconstruct(self):
        out = np.kron(self.local_a, self.local_b).astype(complex)
        for factor in self.factors:
            out = out @ factor.assemble()
        return self.global_phase * out


def build_canonical(weyl_or_angles):
    """exp[i (ax XX + ay YY + az ZZ)] for a Weyl point or raw angle triple."""
    ax, ay, az = tuple(weyl_or_angles)
    return canonical_exponential(ax, ay, az)


def _axis_factor(axis, angle):
    """exp(i angle P_axis P_axis) as a dressed controlled-phase factor plus
    the scalar it contributes to the global phase."""
    conj = _AXIS_FROM_Z[axis]
    left = conj @ phase_z(angle)
    right = dagger(conj)
    factor = ControlledPhaseFactor(
        theta=4 * angle, left=(left, left.copy()), right=(right, right.copy())
    )
    return factor, np.exp(-1j * angle)


def factor_into_controlled(matrix, atol=DEFAULT_ATOL, zero_atol=KC_ZERO_ATOL):
    """Factor a gate into as many controlled-phase gates as its count.

    The gate is decomposed, each nonzero canonical axis becomes one dressed
    controlled-phase factor via the ZZ identity, and the outer local
    dressings are absorbed into the first and last factors.

    Returns:
        Factorization reproducing the input within 10*atol.
    """
    u = as_two_qubit_unitary(matrix, atol)
    dec = decompose(u, atol)
    angles = dec.weyl.as_array()

    factors = []
    phase = dec.global_phase
    for axis in range(3):
        if abs(angles[axis]) > zero_atol:
            factor, scalar = _axis_factor(axis, angles[axis])
            factors.append(factor)
            phase *= scalar

    if not factors:
        return Factorization(
            factors=(),
            global_phase=phase,
            local_a=dec.u_a @ dec.v_a,
            local_b=dec.u_b @ dec.v_b,
        )

    first = factors[0]
    factors[0] = ControlledPhaseFactor(
        first.theta,
        (dec.u_a @ first.left[0], dec.u_b @ first.left[1]),
        first.right,
    )
    last = factors[-1]
    factors[-1] = ControlledPhaseFactor(
        last.theta,
        last.left,
        (last.right[0] @ dec.v_a, last.right[1] @ dec.v_b),
    )
    return Factorization(factors=tuple(factors), global_phase=phase)


def verify_two_controlled_product(theta_1, theta_2, phi_1, phi_2, atol=DEFAULT_ATOL):
    """Interaction count of C_p(t1) (Ry(p1) x Ry(p2)) C_p(t2); always <= 2."""
    w = (
        controlled_phase(theta_1)
        @ np.kron(ry(phi_1), ry(phi_2))
        @ controlled_phase(theta_2)
    )
    return kc_number(decompose(w, atol))


class CompositionCheck(NamedTuple):
    k_u: int
    k_v: int
    k_uv: int
    holds: bool


def check_composition_bounds(u, v, atol=DEFAULT_ATOL, zero_atol=KC_ZERO_ATOL):
    """Verify the triangle-style bounds for the count of a product.

    holds covers both inequalities and the adjoint invariance
    count(U) = count(U^dag) of each operand.
    """
    u = as_two_qubit_unitary(u, atol)
    v = as_two_qubit_unitary(v, atol)
    k_u = kc_number(decompose(u, atol), zero_atol)
    k_v = kc_number(decompose(v, atol), zero_atol)
    k_uv = kc_number(decompose(u @ v, atol), zero_atol)
    bounds_ok = abs(k_u - k_v) <= k_uv <= k_u + k_v
    dagger_ok = (
        kc_number(decompose(dagger(u), atol), zero_atol) == k_u
        and kc_number(decompose(dagger(v), atol), zero_atol) == k_v
    )
    return CompositionCheck(k_u, k_v, k_uv, bool(bounds_ok and dagger_ok))
