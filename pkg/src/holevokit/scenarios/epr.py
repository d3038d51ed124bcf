"""Two qubits measured by sigma_3 on both sides.

States are stored in the order |00>, |01>, |10>, |11> (first factor is
Alice's qubit). The angle parametrisation and the outcome vectors of this
module use the order |00>, |10>, |01>, |11>, i.e. outcomes (1, 1), (-1, 1),
(1, -1), (-1, -1); :data:`PARAM_ORDER` converts between the two.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import OutOfRange, WrongDimension
from ..numerics import DEFAULT_TOL, Tolerance, kronecker
from ..observables import PAULI_Z_PVM, product_pvm, trivial_pvm
from ..states import PAULI_Z, PureState

__all__ = [
    "PARAM_ORDER",
    "EPR_OUTCOMES",
    "SIGN_MATRIX",
    "TwoQubitAngles",
    "BELL_STATE",
    "P3C",
    "P3A",
    "P3B",
    "two_qubit_state",
    "angles_from_moduli",
    "epr_class",
    "epr_lifts",
    "m_map",
    "m_inverse",
    "holevo_projection_A",
    "bell_class_member",
]

PARAM_ORDER = np.array([0, 2, 1, 3])
EPR_OUTCOMES = ((1.0, 1.0), (-1.0, 1.0), (1.0, -1.0), (-1.0, -1.0))
SIGN_MATRIX = np.array([[1, 1, -1, -1], [1, -1, 1, -1]], dtype=float)

P3C = product_pvm(PAULI_Z_PVM, PAULI_Z_PVM)
P3A = product_pvm(PAULI_Z_PVM, trivial_pvm(2))
P3B = product_pvm(trivial_pvm(2), PAULI_Z_PVM)

BELL_STATE = PureState(np.array([1, 0, 0, 1]) / np.sqrt(2))

_SIGMA3_A = kronecker(PAULI_Z, np.eye(2))
_SIGMA3_B = kronecker(np.eye(2), PAULI_Z)


@dataclass(frozen=True)
class TwoQubitAngles:
    theta: tuple
    phi: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        theta = tuple(float(t) for t in self.theta)
        phi = tuple(float(p) for p in self.phi)
        if len(theta) != 3 or len(phi) != 3:
            raise OutOfRange("need three theta and three phi angles")
        if any(not 0.0 <= t <= np.pi for t in theta):
            raise OutOfRange(f"theta angles must lie in [0, pi], got {theta}")
        if any(not 0.0 <= p < 2 * np.pi for p in phi):
            raise OutOfRange(f"phi angles must lie in [0, 2 pi), got {phi}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)


def _moduli_from_angles(theta) -> np.ndarray:
    t1, t2, t3 = (np.asarray(t, dtype=float) / 2 for t in theta)
    s1, s2 = np.sin(t1), np.sin(t2)
    return np.array([np.cos(t1), s1 * np.cos(t2), s1 * s2 * np.cos(t3), s1 * s2 * np.sin(t3)])


def two_qubit_state(p: TwoQubitAngles) -> PureState:
    c = _moduli_from_angles(p.theta).astype(complex)
    c[1:] *= np.exp(1j * np.asarray(p.phi))
    return PureState(c[PARAM_ORDER])


def angles_from_moduli(c) -> tuple[float, float, float]:
    """Invert the angle cascade from the moduli ``|c_0|..|c_3|`` (parameter order).

    Written with ``atan2`` of partial norms, which equals the ``arccos``
    cascade for unit vectors and sets the trailing angles to 0 when the
    remaining amplitudes vanish.
    """
    a = np.abs(np.asarray(c))
    t1 = 2 * np.arctan2(np.sqrt(a[1] ** 2 + a[2] ** 2 + a[3] ** 2), a[0])
    t2 = 2 * np.arctan2(np.hypot(a[2], a[3]), a[1])
    t3 = 2 * np.arctan2(a[3], a[2])
    return float(t1), float(t2), float(t3)


def _need_two_qubits(h: PureState):
    if h.dim != 4:
        raise WrongDimension(f"expected a two-qubit state, got dimension {h.dim}", dim=h.dim)


def epr_class(h: PureState, tol: Tolerance = DEFAULT_TOL) -> tuple[float, float, float]:
    """Angle triple labelling the class of ``h`` under the joint sigma_3 outcome pair."""
    _need_two_qubits(h)
    return angles_from_moduli(h.amplitudes[PARAM_ORDER])


def epr_lifts(triple) -> np.ndarray:
    """Outcome probabilities over :data:`EPR_OUTCOMES` at class ``triple``."""
    return _moduli_from_angles(triple) ** 2


def m_map(h: PureState) -> tuple[float, float]:
    """Local spin expectations ``(<sigma_3 (x) I>, <I (x) sigma_3>)``."""
    _need_two_qubits(h)
    v = h.amplitudes
    return float(np.vdot(v, _SIGMA3_A @ v).real), float(np.vdot(v, _SIGMA3_B @ v).real)


def m_inverse(m1: float, m2: float) -> PureState:
    """Product state ``(sqrt(l)|0> + sqrt(1-l)|1>) (x) phi`` with the given local expectations."""
    if not (-1.0 <= m1 <= 1.0 and -1.0 <= m2 <= 1.0):
        raise OutOfRange(f"(m1, m2) = ({m1}, {m2}) outside [-1, 1]^2", m1=m1, m2=m2)
    phi = np.array([np.sqrt((1 + m2) / 2), np.sqrt((1 - m2) / 2)])
    lam = (1 + m1) / 2
    first = np.array([np.sqrt(lam), np.sqrt(1 - lam)])
    return PureState(np.kron(first, phi))


def holevo_projection_A(triple) -> tuple[float, float]:
    m = SIGN_MATRIX @ epr_lifts(triple)
    return float(m[0]), float(m[1])


def bell_class_member(a: complex, b: complex, eta) -> PureState:
    """``(a, b e^{i eta_1}, b e^{i eta_2}, a e^{i eta_3}) / sqrt 2`` with ``|a|^2 + |b|^2 = 1``."""
    e1, e2, e3 = eta
    v = np.array([a, b * np.exp(1j * e1), b * np.exp(1j * e2), a * np.exp(1j * e3)]) / np.sqrt(2)
    return PureState(v)
