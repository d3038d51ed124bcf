"""Finite-outcome projection-valued measures.

Outcome labels are tuples of numbers; a PVM keeps its outcomes sorted
lexicographically by label (complex components compare by real part, then
imaginary part). Outcomes with a zero projection are never stored.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np

from .errors import DimensionMismatch, InvalidPVM, NotCommuting, NotNormal, WrongDimension
from .numerics import (
    DEFAULT_TOL,
    Tolerance,
    as_matrix,
    cluster_sorted,
    hermitian_eigensystem,
    is_orthogonal_projection,
    kronecker,
    max_norm,
    orthonormal_columns,
    projector_onto,
)
from .states import as_density

__all__ = [
    "PVM",
    "clean_label_value",
    "pvm_from_hermitian",
    "trivial_pvm",
    "product_pvm",
    "rotation_matrix",
    "rotate_pvm_qubit",
    "joint_pvm_commuting",
    "measurement_distribution",
    "distribution_by_label",
    "PAULI_Z_PVM",
]


def clean_label_value(x, tol: Tolerance = DEFAULT_TOL):
    """Snap a label component to a tidy float (integers and -0.0 cleaned up)."""
    z = complex(x)
    parts = []
    for part in (z.real, z.imag):
        r = round(part)
        part = float(r) if abs(part - r) <= tol.abs_eq else round(part, 12)
        parts.append(part + 0.0)
    if parts[1] == 0.0:
        return parts[0]
    return complex(parts[0], parts[1])


def _label_key(label):
    return tuple((complex(c).real, complex(c).imag) for c in label)


@dataclass(frozen=True, eq=False)
class PVM:
    """Projection-valued measure on a finite outcome set.

    ``outcomes`` is a tuple of ``(label, projection)`` pairs with tuple
    labels, sorted lexicographically. Construction validates projection,
    orthogonality and completeness within ``tol.abs_eq``.
    """

    dim: int
    outcomes: tuple
    tol: Tolerance = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        outs = []
        for label, proj in self.outcomes:
            label = tuple(label) if isinstance(label, (tuple, list)) else (label,)
            proj = as_matrix(proj).copy()
            if proj.shape != (self.dim, self.dim):
                raise InvalidPVM(f"projection for {label} has shape {proj.shape}, "
                                 f"expected {(self.dim, self.dim)}")
            proj.setflags(write=False)
            outs.append((label, proj))
        outs.sort(key=lambda o: _label_key(o[0]))
        labels = [o[0] for o in outs]
        if len({_label_key(lab) for lab in labels}) != len(labels):
            raise InvalidPVM("outcome labels must be distinct")
        tol = self.tol
        for label, p in outs:
            if not is_orthogonal_projection(p, tol):
                raise InvalidPVM(f"outcome {label} is not an orthogonal projection")
        for (la, pa), (lb, pb) in combinations(outs, 2):
            if max_norm(pa @ pb) > tol.abs_eq:
                raise InvalidPVM(f"outcomes {la} and {lb} are not orthogonal")
        total = sum((p for _, p in outs), np.zeros((self.dim, self.dim), dtype=complex))
        if max_norm(total - np.eye(self.dim)) > tol.abs_eq:
            raise InvalidPVM("projections do not sum to the identity")
        object.__setattr__(self, "outcomes", tuple(outs))

    @property
    def labels(self) -> list[tuple]:
        return [label for label, _ in self.outcomes]

    @property
    def projections(self) -> list[np.ndarray]:
        return [p for _, p in self.outcomes]

    def __len__(self):
        return len(self.outcomes)

    def __getitem__(self, label) -> np.ndarray:
        label = tuple(label) if isinstance(label, (tuple, list)) else (label,)
        key = _label_key(label)
        for lab, p in self.outcomes:
            if _label_key(lab) == key:
                return p
        raise KeyError(label)


def pvm_from_hermitian(a, tol: Tolerance = DEFAULT_TOL) -> PVM:
    """Spectral PVM of a Hermitian matrix, labelled by its clustered eigenvalues."""
    a = as_matrix(a)
    eig = hermitian_eigensystem(a, tol)
    return PVM(a.shape[0], tuple(((clean_label_value(lam, tol),), p) for lam, p in eig), tol)


def trivial_pvm(d: int, label=(1.0,)) -> PVM:
    return PVM(d, ((label, np.eye(d)),))


def product_pvm(p: PVM, q: PVM) -> PVM:
    """Product measure: outcome ``(lp..., lq...)`` has projection ``P_lp (x) Q_lq``."""
    outs = [(lp + lq, kronecker(pp, qq)) for (lp, pp), (lq, qq) in product(p.outcomes, q.outcomes)]
    outs = [(lab, m) for lab, m in outs if max_norm(m) > p.tol.abs_eq]
    return PVM(p.dim * q.dim, tuple(outs), p.tol)


def rotation_matrix(gamma: float) -> np.ndarray:
    """Real rotation ((cos g, -sin g), (sin g, cos g))."""
    c, s = np.cos(gamma), np.sin(gamma)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rotate_pvm_qubit(p: PVM, gamma: float) -> PVM:
    """Replace every projection ``P`` by ``R* P R`` with ``R`` the rotation by ``gamma``."""
    if p.dim != 2:
        raise WrongDimension(f"qubit rotation needs dim 2, got {p.dim}", dim=p.dim)
    r = rotation_matrix(gamma)
    return PVM(2, tuple((lab, r.conj().T @ m @ r) for lab, m in p.outcomes), p.tol)


def _refine(blocks, herm, tol):
    """Split every block (basis, labels) by the eigenspaces of ``herm`` compressed to it."""
    out = []
    for basis, labels in blocks:
        sub = basis.conj().T @ herm @ basis
        sub = (sub + sub.conj().T) / 2
        w, v = np.linalg.eigh(sub)
        for group in cluster_sorted(w, tol.eig_cluster):
            new_basis = orthonormal_columns(basis @ v[:, group])
            out.append((new_basis, labels + [float(np.mean(w[group]))]))
    return out


def joint_pvm_commuting(family, tol: Tolerance = DEFAULT_TOL) -> PVM:
    """Joint spectral PVM of commuting normal matrices.

    The space is split by the eigenspaces of the first matrix, each block is
    split again by the second, and so on. A non-Hermitian normal matrix is
    handled through its commuting Hermitian real and imaginary parts; its
    label component is then complex.

    Parameters
    ----------
    family : sequence of array_like
        Pairwise commuting normal matrices of a common dimension.
    tol : Tolerance

    Returns
    -------
    PVM
        Outcomes are joint eigenvalue tuples ``(l1, ..., ln)``.
    """
    mats = [as_matrix(m) for m in family]
    if not mats:
        raise InvalidPVM("joint PVM needs at least one matrix")
    d = mats[0].shape[0]
    for i, m in enumerate(mats):
        if m.shape != (d, d):
            raise DimensionMismatch(f"matrix {i} has shape {m.shape}, expected {(d, d)}")
        dev = max_norm(m @ m.conj().T - m.conj().T @ m)
        if dev > tol.abs_eq:
            raise NotNormal(f"matrix {i} is not normal (deviation {dev:.3e})", index=i, deviation=dev)
    for (i, a), (j, b) in combinations(enumerate(mats), 2):
        c = max_norm(a @ b - b @ a)
        if c > tol.abs_eq:
            raise NotCommuting(f"matrices {i} and {j} do not commute (norm {c:.3e})",
                               pair=[i, j], norm=c)

    blocks = [(np.eye(d, dtype=complex), [])]
    hermitian_flags = []
    for m in mats:
        re_part = (m + m.conj().T) / 2
        im_part = (m - m.conj().T) / 2j
        is_herm = max_norm(im_part) <= tol.abs_eq
        hermitian_flags.append(is_herm)
        blocks = _refine(blocks, re_part, tol)
        if not is_herm:
            blocks = _refine(blocks, im_part, tol)

    outs = []
    for basis, comps in blocks:
        label, k = [], 0
        for is_herm in hermitian_flags:
            if is_herm:
                label.append(clean_label_value(comps[k], tol))
                k += 1
            else:
                label.append(clean_label_value(complex(comps[k], comps[k + 1]), tol))
                k += 2
        outs.append((tuple(label), projector_onto(basis)))
    return PVM(d, tuple(outs), tol)


def measurement_distribution(p: PVM, state) -> np.ndarray:
    """Born-rule probabilities ``tr(P_i rho)`` in the PVM's outcome order."""
    rho = as_density(state)
    if rho.dim != p.dim:
        raise DimensionMismatch(f"state dimension {rho.dim} does not match PVM dimension {p.dim}",
                                state_dim=rho.dim, pvm_dim=p.dim)
    probs = np.array([np.trace(m @ rho.matrix).real for m in p.projections])
    if np.any(probs < -p.tol.abs_eq) or abs(probs.sum() - 1) > p.tol.abs_eq:
        raise InvalidPVM("Born-rule probabilities out of range", probabilities=probs.tolist())
    return np.clip(probs, 0.0, 1.0)


def distribution_by_label(p: PVM, state) -> dict:
    return dict(zip(p.labels, measurement_distribution(p, state)))


PAULI_Z_PVM = pvm_from_hermitian(np.diag([1.0, -1.0]))
