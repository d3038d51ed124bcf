"""Pure and mixed states.

A :class:`PureState` is stored in canonical global phase: the first
amplitude with modulus above ``tol.abs_eq`` is real and nonnegative, so two
vectors that differ only by a unimodular factor compare equal.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, InvalidState, WrongDimension
from .numerics import DEFAULT_TOL, Tolerance, as_matrix, frobenius_norm, max_norm

__all__ = [
    "PureState",
    "DensityMatrix",
    "BlochVector",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "canonical_phase",
    "density_from_pure",
    "as_density",
    "overlap",
    "hs_distance_pure",
    "hs_distance",
    "bloch_from_pure",
    "random_pure",
    "basis_state",
]

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def canonical_phase(v, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Multiply ``v`` by the unimodular scalar making its leading amplitude real >= 0."""
    v = np.asarray(v, dtype=complex)
    big = np.flatnonzero(np.abs(v) > tol.abs_eq)
    if big.size == 0:
        return v.copy()
    lead = v[big[0]]
    out = v * (abs(lead) / lead)
    out[big[0]] = abs(lead)  # exactly real, no rounding residue
    return out


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit vector in C^d, stored in canonical global phase."""

    amplitudes: np.ndarray
    tol: Tolerance = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        v = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if v.size == 0 or not np.all(np.isfinite(v)):
            raise InvalidState("amplitudes must be a nonempty finite vector")
        norm = np.linalg.norm(v)
        if abs(norm**2 - 1) > self.tol.abs_eq:
            raise InvalidState(f"state is not normalised (norm^2 = {norm**2:.12g})",
                               norm_sq=float(norm**2))
        v = canonical_phase(v / norm, self.tol)
        v.setflags(write=False)
        object.__setattr__(self, "amplitudes", v)

    @classmethod
    def normalized(cls, v, tol: Tolerance = DEFAULT_TOL) -> "PureState":
        """Build a state from an arbitrary nonzero vector by normalising it."""
        v = np.asarray(v, dtype=complex).reshape(-1)
        norm = np.linalg.norm(v)
        if norm == 0:
            raise InvalidState("cannot normalise the zero vector")
        return cls(v / norm, tol)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def __eq__(self, other):
        if not isinstance(other, PureState) or other.dim != self.dim:
            return NotImplemented
        return max_norm(self.amplitudes - other.amplitudes) <= self.tol.abs_eq

    __hash__ = None


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Positive semidefinite, trace-one matrix."""

    matrix: np.ndarray
    tol: Tolerance = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        m = as_matrix(self.matrix)
        asym = max_norm(m - m.conj().T)
        if asym > self.tol.abs_eq:
            raise InvalidState(f"density matrix is not Hermitian (asymmetry {asym:.3e})")
        m = (m + m.conj().T) / 2
        tr = np.trace(m).real
        if abs(tr - 1) > self.tol.abs_eq:
            raise InvalidState(f"density matrix trace is {tr:.12g}, expected 1", trace=tr)
        lowest = float(np.linalg.eigvalsh(m)[0])
        if lowest < -self.tol.abs_eq:
            raise InvalidState(f"density matrix has negative eigenvalue {lowest:.3e}",
                               min_eigenvalue=lowest)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


def density_from_pure(h: PureState) -> DensityMatrix:
    v = h.amplitudes
    return DensityMatrix(np.outer(v, v.conj()), h.tol)


def as_density(s) -> DensityMatrix:
    """Accept a :class:`PureState` or :class:`DensityMatrix`."""
    if isinstance(s, DensityMatrix):
        return s
    if isinstance(s, PureState):
        return density_from_pure(s)
    raise InvalidState(f"expected a state, got {type(s).__name__}")


def _check_dims(h1: PureState, h2: PureState):
    if h1.dim != h2.dim:
        raise DimensionMismatch(f"state dimensions differ: {h1.dim} vs {h2.dim}",
                                left=h1.dim, right=h2.dim)


def overlap(h1: PureState, h2: PureState) -> complex:
    """Inner product <h1, h2>, linear in the first argument."""
    _check_dims(h1, h2)
    return complex(np.vdot(h2.amplitudes, h1.amplitudes))


def hs_distance_pure(h1: PureState, h2: PureState) -> float:
    """Hilbert-Schmidt distance of the rank-one projections, sqrt(2(1 - |<h1,h2>|^2)).

    ``1 - |<h1,h2>|^2`` is evaluated through the Lagrange identity
    ``|a|^2 |b|^2 - |<a,b>|^2 = 1/2 sum_ij |a_i b_j - a_j b_i|^2``, which keeps
    full relative accuracy for nearly equal states.
    """
    _check_dims(h1, h2)
    a, b = h1.amplitudes, h2.amplitudes
    wedge = np.outer(a, b) - np.outer(b, a)
    gap = 0.5 * float(np.sum(np.abs(wedge) ** 2))
    return float(np.sqrt(2.0 * gap))


def hs_distance(s1, s2) -> float:
    """Frobenius distance between two (pure or mixed) states."""
    r1, r2 = as_density(s1), as_density(s2)
    if r1.dim != r2.dim:
        raise DimensionMismatch(f"state dimensions differ: {r1.dim} vs {r2.dim}")
    return frobenius_norm(r1.matrix - r2.matrix)


def bloch_from_pure(h: PureState) -> BlochVector:
    if h.dim != 2:
        raise WrongDimension(f"Bloch vectors need a qubit, got dimension {h.dim}", dim=h.dim)
    v = h.amplitudes
    x, y, z = (float(np.vdot(v, p @ v).real) for p in (PAULI_X, PAULI_Y, PAULI_Z))
    return BlochVector(x, y, z)


def random_pure(d: int, seed_or_rng, tol: Tolerance = DEFAULT_TOL) -> PureState:
    """Haar-random pure state from normalised complex Gaussians.

    ``seed_or_rng`` is an integer seed or a ``numpy.random.Generator``; no
    global random state is touched.
    """
    if d < 1:
        raise InvalidState(f"dimension must be >= 1, got {d}")
    rng = np.random.default_rng(seed_or_rng)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState.normalized(v, tol)


def basis_state(d: int, k: int) -> PureState:
    v = np.zeros(d, dtype=complex)
    v[k] = 1.0
    return PureState(v)
