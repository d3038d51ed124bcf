"""Spin measurements behind rotated polarisers."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..algebra import AbelianAlgebra, algebra_from_pvm
from ..errors import HolevoError, WrongDimension
from ..numerics import DEFAULT_TOL, Tolerance, kronecker
from ..observables import PAULI_Z_PVM, PVM, distribution_by_label, product_pvm, rotate_pvm_qubit, rotation_matrix
from ..states import PureState, overlap
from .epr import EPR_OUTCOMES, PARAM_ORDER, _moduli_from_angles, angles_from_moduli

__all__ = [
    "BellSettings",
    "bell_pvm",
    "bell_algebra",
    "bell_rotation_4x4",
    "bell_stats",
    "bell_closed_form",
    "rotated_triple",
    "theta_recover",
    "invariant_states",
    "rotation_invariance_defect",
    "rotated_projection_commutator",
]


@dataclass(frozen=True)
class BellSettings:
    gamma_a: float
    gamma_b: float

    def __post_init__(self):
        if not (np.isfinite(self.gamma_a) and np.isfinite(self.gamma_b)):
            raise HolevoError("rotation angles must be finite")


def bell_pvm(s: BellSettings) -> PVM:
    """Joint outcome-pair PVM after rotating both sigma_3 measurements."""
    return product_pvm(rotate_pvm_qubit(PAULI_Z_PVM, s.gamma_a), rotate_pvm_qubit(PAULI_Z_PVM, s.gamma_b))


def bell_algebra(s: BellSettings) -> AbelianAlgebra:
    return algebra_from_pvm(bell_pvm(s))


def bell_rotation_4x4(s: BellSettings) -> np.ndarray:
    """Matrix of ``R_a (x) R_b`` in the basis |00>, |01>, |10>, |11>."""
    ca, sa = np.cos(s.gamma_a), np.sin(s.gamma_a)
    cb, sb = np.cos(s.gamma_b), np.sin(s.gamma_b)
    return np.array([
        [ca * cb, -ca * sb, -sa * cb, sa * sb],
        [ca * sb, ca * cb, -sa * sb, -sa * cb],
        [sa * cb, -sa * sb, ca * cb, -ca * sb],
        [sa * sb, sa * cb, ca * sb, ca * cb],
    ])


def bell_stats(s: BellSettings, h: PureState) -> np.ndarray:
    """Outcome-pair probabilities over ``EPR_OUTCOMES`` for state ``h``."""
    if h.dim != 4:
        raise WrongDimension(f"expected a two-qubit state, got dimension {h.dim}", dim=h.dim)
    dist = distribution_by_label(bell_pvm(s), h)
    return np.array([dist.get(o, 0.0) for o in EPR_OUTCOMES])


def bell_closed_form(delta: float) -> np.ndarray:
    c2, s2 = np.cos(delta) ** 2 / 2, np.sin(delta) ** 2 / 2
    return np.array([c2, s2, s2, c2])


def rotated_triple(s: BellSettings, h: PureState) -> tuple[float, float, float]:
    """Angle triple of ``(R_a (x) R_b) h``; it labels the class of ``h`` for the rotated PVM."""
    if h.dim != 4:
        raise WrongDimension(f"expected a two-qubit state, got dimension {h.dim}", dim=h.dim)
    rotated = bell_rotation_4x4(s) @ h.amplitudes
    return angles_from_moduli(rotated[PARAM_ORDER])


def theta_recover(s: BellSettings, triple) -> tuple[float, float, float]:
    """Rotated triple of the real, phase-free state with angles ``triple``."""
    c = _moduli_from_angles(triple)
    rotated = bell_rotation_4x4(s) @ c[PARAM_ORDER]
    return angles_from_moduli(rotated[PARAM_ORDER])


_Y_PLUS = np.array([1, 1j]) / np.sqrt(2)
_Y_MINUS = np.array([1, -1j]) / np.sqrt(2)


def rotation_invariance_defect(h: PureState, s: BellSettings) -> float:
    """``1 - |<h, (R_a (x) R_b) h>|``; zero iff ``h`` is mapped to itself up to phase."""
    rotated = PureState.normalized(bell_rotation_4x4(s) @ h.amplitudes)
    return 1.0 - abs(overlap(h, rotated))


def invariant_states(tol: Tolerance = DEFAULT_TOL, settings=None) -> list[PureState]:
    """The product states ``y_i (x) y_j`` of sigma_2 eigenvectors, i, j in {+, -}.

    Each is checked to be fixed up to phase by ``R_a (x) R_b`` for every pair
    in ``settings`` (a fixed pseudo-random sample by default).
    """
    states = [PureState(np.kron(a, b)) for a in (_Y_PLUS, _Y_MINUS) for b in (_Y_PLUS, _Y_MINUS)]
    if settings is None:
        angles = np.random.default_rng(0).uniform(-np.pi, np.pi, size=(16, 2))
        settings = [BellSettings(*g) for g in angles]
    for s in settings:
        for h in states:
            defect = rotation_invariance_defect(h, s)
            if defect > tol.abs_eq:
                raise HolevoError("invariant state moved by rotation",
                                  settings=[s.gamma_a, s.gamma_b], defect=defect)
    return states


def rotated_projection_commutator(gamma1: float, gamma2: float) -> np.ndarray:
    """Commutator of the rotated projections ``R_g* diag(1, 0) R_g`` for two angles."""
    p = np.diag([1.0, 0.0])
    r1, r2 = rotation_matrix(gamma1), rotation_matrix(gamma2)
    a, b = r1.conj().T @ p @ r1, r2.conj().T @ p @ r2
    return a @ b - b @ a
