"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``;
:func:`as_matrix` is the single validation entry point.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, HolevoError, NotHermitian, NotSquare

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "as_matrix",
    "max_norm",
    "is_hermitian",
    "hermitian_eigensystem",
    "cluster_sorted",
    "orthonormal_columns",
    "kronecker",
    "matrix_commutator",
    "is_orthogonal_projection",
    "frobenius_norm",
    "projector_onto",
]


@dataclass(frozen=True)
class Tolerance:
    """Numerical tolerances.

    ``abs_eq`` is the entrywise equality threshold, ``eig_cluster`` the gap
    below which eigenvalues belong to the same spectral cluster and
    ``opt_conv`` the convergence threshold of iterative searches.
    """

    abs_eq: float = 1e-9
    eig_cluster: float = 1e-8
    opt_conv: float = 1e-6

    def __post_init__(self):
        for name in ("abs_eq", "eig_cluster", "opt_conv"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise HolevoError(f"tolerance {name} must be positive, got {value!r}")
        if self.abs_eq > self.eig_cluster:
            raise HolevoError("abs_eq must not exceed eig_cluster",
                              abs_eq=self.abs_eq, eig_cluster=self.eig_cluster)


DEFAULT_TOL = Tolerance()


def as_matrix(m, square: bool = True) -> np.ndarray:
    """Return ``m`` as a finite 2-D complex array, optionally requiring squareness."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise NotSquare(f"expected a 2-D matrix, got shape {a.shape}", shape=list(a.shape))
    if not np.all(np.isfinite(a)):
        raise HolevoError("matrix entries must be finite")
    if square and a.shape[0] != a.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {a.shape}", shape=list(a.shape))
    return a


def max_norm(m) -> float:
    """Largest entry modulus."""
    m = np.asarray(m)
    return float(np.max(np.abs(m))) if m.size else 0.0


def is_hermitian(m, tol: Tolerance = DEFAULT_TOL) -> bool:
    m = as_matrix(m)
    return max_norm(m - m.conj().T) <= tol.abs_eq


def cluster_sorted(values, gap: float) -> list[list[int]]:
    """Group indices of ascending ``values`` whose consecutive gaps are <= ``gap``."""
    groups: list[list[int]] = []
    for i, v in enumerate(values):
        if groups and v - values[groups[-1][-1]] <= gap:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def orthonormal_columns(v: np.ndarray) -> np.ndarray:
    """Re-orthonormalise the columns of ``v`` (thin QR, phases kept)."""
    if v.shape[1] == 0:
        return v
    q, r = np.linalg.qr(v)
    d = np.diag(r)
    phases = np.where(np.abs(d) > 0, d / np.where(np.abs(d) > 0, np.abs(d), 1), 1)
    return q * phases


def projector_onto(v: np.ndarray) -> np.ndarray:
    """Orthogonal projection onto the span of orthonormal columns ``v``."""
    return v @ v.conj().T


def hermitian_eigensystem(m, tol: Tolerance = DEFAULT_TOL) -> list[tuple[float, np.ndarray]]:
    """Spectral decomposition of a Hermitian matrix into clustered eigenprojections.

    Parameters
    ----------
    m : array_like
        Square Hermitian matrix.
    tol : Tolerance
        ``abs_eq`` bounds the allowed asymmetry; eigenvalues closer than
        ``eig_cluster`` are merged into a single spectral cluster.

    Returns
    -------
    list of (float, ndarray)
        ``(eigenvalue, projection)`` pairs, eigenvalues ascending. The
        eigenvalue of a merged cluster is the mean of its members.
    """
    m = as_matrix(m)
    asym = max_norm(m - m.conj().T)
    if asym > tol.abs_eq:
        raise NotHermitian(f"matrix is not Hermitian (asymmetry {asym:.3e})", asymmetry=asym)
    herm = (m + m.conj().T) / 2
    w, v = np.linalg.eigh(herm)
    out = []
    for group in cluster_sorted(w, tol.eig_cluster):
        vecs = orthonormal_columns(v[:, group])
        out.append((float(np.mean(w[group])), projector_onto(vecs)))
    return out


def kronecker(a, b) -> np.ndarray:
    """Kronecker product; for qubits the basis order is |00>, |01>, |10>, |11>."""
    return np.kron(as_matrix(a, square=False), as_matrix(b, square=False))


def matrix_commutator(a, b) -> np.ndarray:
    """Return ``ab - ba``."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"cannot commute shapes {a.shape} and {b.shape}",
                                left=list(a.shape), right=list(b.shape))
    return a @ b - b @ a


def is_orthogonal_projection(m, tol: Tolerance = DEFAULT_TOL) -> bool:
    m = as_matrix(m)
    return max_norm(m - m.conj().T) <= tol.abs_eq and max_norm(m @ m - m) <= tol.abs_eq


def frobenius_norm(m) -> float:
    return float(np.sqrt(np.sum(np.abs(np.asarray(m, dtype=complex)) ** 2)))
