"""Single qubit measured along the z axis."""
from __future__ import annotations

import numpy as np

from ..algebra import AbelianAlgebra, algebra_from_pvm
from ..errors import WrongDimension
from ..observables import PAULI_Z_PVM
from ..states import PureState

__all__ = ["qubit_state", "qubit_class", "qubit_lifts", "z_algebra"]


def qubit_state(theta: float, phi: float = 0.0) -> PureState:
    """``cos(theta/2)|0> + exp(i phi) sin(theta/2)|1>``."""
    return PureState([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])


def qubit_class(h: PureState) -> float:
    """Polar angle in [0, pi]; it labels the class of ``h`` under the z spin."""
    if h.dim != 2:
        raise WrongDimension(f"expected a qubit, got dimension {h.dim}", dim=h.dim)
    a0, a1 = np.abs(h.amplitudes)
    return float(2 * np.arctan2(a1, a0))


def qubit_lifts(theta: float) -> tuple[float, float]:
    """Lifted probabilities of outcomes +1 and -1 at class ``theta``."""
    return float(np.cos(theta / 2) ** 2), float(np.sin(theta / 2) ** 2)


def z_algebra() -> AbelianAlgebra:
    """Atoms diag(1, 0) and diag(0, 1), in that order."""
    return algebra_from_pvm(PAULI_Z_PVM)
