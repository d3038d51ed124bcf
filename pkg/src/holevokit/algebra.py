"""Abelian algebras generated by commuting projections.

Atoms are the minimal joint eigenprojections of the generators. They are
ordered by the first basis index in their range (ties by larger diagonal
weight there), which keeps simplex coordinates stable and matches the
natural order for diagonal generators.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy.linalg import null_space

from .errors import DimensionMismatch, NotCommuting, NotIndiscernible, NotProjection, SpectralAmbiguity
from .numerics import (
    DEFAULT_TOL,
    Tolerance,
    as_matrix,
    hermitian_eigensystem,
    is_orthogonal_projection,
    matrix_commutator,
    max_norm,
)
from .observables import PVM, joint_pvm_commuting
from .states import PureState

__all__ = [
    "AbelianAlgebra",
    "WitnessUnitary",
    "IncompatibilityReport",
    "atoms_from_projections",
    "algebra_from_pvm",
    "algebra_from_pvms",
    "commutant_basis",
    "witness_unitary",
    "single_generator",
    "recover_projection",
    "incompatibility_check",
]


@dataclass(frozen=True, eq=False)
class AbelianAlgebra:
    """Atom decomposition of the algebra generated by commuting projections."""

    dim: int
    atoms: tuple  # of (projection, rank)
    generators: tuple = ()
    tol: Tolerance = field(default=DEFAULT_TOL, repr=False)

    @property
    def projections(self) -> list[np.ndarray]:
        return [q for q, _ in self.atoms]

    @property
    def ranks(self) -> list[int]:
        return [r for _, r in self.atoms]

    def __len__(self):
        return len(self.atoms)


@dataclass(frozen=True, eq=False)
class WitnessUnitary:
    matrix: np.ndarray
    residual_commutation: float
    mapping_error: float

    @property
    def unitarity_error(self) -> float:
        u = self.matrix
        return max_norm(u.conj().T @ u - np.eye(u.shape[0]))


@dataclass(frozen=True)
class IncompatibilityReport:
    compatible: bool
    max_commutator_norm: float
    witness_pair: tuple


def _atom_order_key(q: np.ndarray, tol: Tolerance):
    diag = np.real(np.diag(q))
    threshold = np.sqrt(tol.abs_eq)
    first = int(np.flatnonzero(diag > threshold)[0])
    return (first, -diag[first])


def _check_projections(generators, tol):
    gens = [as_matrix(g) for g in generators]
    if gens:
        d = gens[0].shape[0]
        for i, g in enumerate(gens):
            if g.shape != (d, d):
                raise DimensionMismatch(f"generator {i} has shape {g.shape}, expected {(d, d)}")
            if not is_orthogonal_projection(g, tol):
                raise NotProjection(f"generator {i} is not an orthogonal projection", index=i)
    for (i, a), (j, b) in combinations(enumerate(gens), 2):
        c = max_norm(a @ b - b @ a)
        if c > tol.abs_eq:
            raise NotCommuting(f"generators {i} and {j} do not commute (norm {c:.3e})",
                               pair=[i, j], norm=c)
    return gens


def atoms_from_projections(generators, tol: Tolerance = DEFAULT_TOL, dim: int | None = None) -> AbelianAlgebra:
    """Atoms of the algebra generated by commuting orthogonal projections.

    With no generators the algebra is the scalars and its single atom is the
    identity; ``dim`` must then be given.
    """
    gens = _check_projections(generators, tol)
    if not gens:
        if dim is None:
            raise DimensionMismatch("dim is required when there are no generators")
        return AbelianAlgebra(dim, ((np.eye(dim, dtype=complex), dim),), (), tol)
    d = gens[0].shape[0]
    joint = joint_pvm_commuting(gens, tol)
    atoms = [(q, int(round(np.trace(q).real))) for q in joint.projections]
    atoms.sort(key=lambda a: _atom_order_key(a[0], tol))
    return AbelianAlgebra(d, tuple(atoms), tuple(gens), tol)


def algebra_from_pvm(p: PVM) -> AbelianAlgebra:
    return atoms_from_projections(p.projections, p.tol)


def algebra_from_pvms(pvms, tol: Tolerance = DEFAULT_TOL) -> AbelianAlgebra:
    """Algebra generated by the ranges of several commuting PVMs."""
    gens = [m for p in pvms for m in p.projections]
    dim = pvms[0].dim if pvms else None
    return atoms_from_projections(gens, tol, dim=dim)


def commutant_basis(generators, tol: Tolerance = DEFAULT_TOL, dim: int | None = None) -> list[np.ndarray]:
    """Frobenius-orthonormal basis of ``{X : gX = Xg for every generator g}``.

    Row-major vectorisation turns ``gX - Xg`` into ``(g (x) I - I (x) g^T) vec(X)``;
    the commutant is the null space of the stacked operators.
    """
    gens = [as_matrix(g) for g in generators]
    if not gens:
        if dim is None:
            raise DimensionMismatch("dim is required when there are no generators")
        basis = []
        for i in range(dim):
            for j in range(dim):
                e = np.zeros((dim, dim), dtype=complex)
                e[i, j] = 1.0
                basis.append(e)
        return basis
    d = gens[0].shape[0]
    for i, g in enumerate(gens):
        if g.shape != (d, d):
            raise DimensionMismatch(f"generator {i} has shape {g.shape}, expected {(d, d)}")
    eye = np.eye(d)
    stacked = np.vstack([np.kron(g, eye) - np.kron(eye, g.T) for g in gens])
    scale = max(1.0, max(max_norm(g) for g in gens))
    ns = null_space(stacked, rcond=tol.eig_cluster * scale / max(1.0, np.linalg.norm(stacked, 2)))
    basis = []
    for k in range(ns.shape[1]):
        x = ns[:, k].reshape(d, d)
        flat = x.reshape(-1)
        lead = flat[np.flatnonzero(np.abs(flat) > np.sqrt(tol.abs_eq))[0]]
        basis.append(x * (abs(lead) / lead))
    return basis


def _block_unitary(u: np.ndarray, v: np.ndarray, tol: Tolerance) -> np.ndarray:
    """Unitary moving unit vector ``u`` to unit vector ``v``, identity off span{u, v}."""
    d = u.shape[0]
    ip = np.vdot(u, v)
    r = abs(ip)
    phase = ip / r if r > tol.abs_eq else 1.0
    v_aligned = v / phase  # <u, v_aligned> = r >= 0
    w = v_aligned - r * u
    s = np.linalg.norm(w)
    if s <= tol.abs_eq:
        return np.eye(d, dtype=complex) + (phase - 1.0) * np.outer(u, u.conj())
    w = w / s
    c = r
    s = np.sqrt(max(0.0, 1.0 - c * c))
    # rotation in the (u, w) plane followed by the phase on that plane
    rot = (c * (np.outer(u, u.conj()) + np.outer(w, w.conj()))
           + s * (np.outer(w, u.conj()) - np.outer(u, w.conj())))
    plane = np.outer(u, u.conj()) + np.outer(w, w.conj())
    return np.eye(d, dtype=complex) - plane + phase * rot


def witness_unitary(alg: AbelianAlgebra, h: PureState, h2: PureState,
                    tol: Tolerance = DEFAULT_TOL) -> WitnessUnitary:
    """Unitary in the commutant of ``alg`` mapping ``h`` to ``h2``.

    Built block by block: inside each atom the normalised component of ``h``
    is rotated onto that of ``h2``; zero-weight atoms get the identity.

    Raises
    ------
    NotIndiscernible
        If some atom carries different weight in the two states.
    """
    if h.dim != alg.dim or h2.dim != alg.dim:
        raise DimensionMismatch("state and algebra dimensions differ",
                                algebra_dim=alg.dim, dims=[h.dim, h2.dim])
    x, y = h.amplitudes, h2.amplitudes
    u_total = np.zeros((alg.dim, alg.dim), dtype=complex)
    for j, (q, _) in enumerate(alg.atoms):
        qx, qy = q @ x, q @ y
        wx, wy = np.vdot(qx, qx).real, np.vdot(qy, qy).real
        if abs(wx - wy) > tol.abs_eq:
            raise NotIndiscernible(f"atom {j} weights differ: {wx:.12g} vs {wy:.12g}",
                                   atom=j, deviation=abs(wx - wy))
        if wx <= tol.abs_eq ** 2 or wy <= tol.abs_eq ** 2:
            u_total += q
            continue
        block = _block_unitary(qx / np.sqrt(wx), qy / np.sqrt(wy), tol)
        u_total += q @ block @ q
    gens = list(alg.generators) or alg.projections
    residual = max(max_norm(matrix_commutator(u_total, g)) for g in gens)
    mapping = float(np.linalg.norm(u_total @ x - y))
    return WitnessUnitary(u_total, residual, mapping)


def single_generator(generators, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Return ``sum_k 3**-k P_k`` for commuting projections ``P_0..P_{n-1}``."""
    gens = _check_projections(generators, tol)
    if not gens:
        raise NotProjection("single_generator needs at least one projection")
    return sum(g * 3.0 ** (-k) for k, g in enumerate(gens))


def _ternary_digit(lam: float, k: int, tol: Tolerance) -> int:
    """k-th {0,1}-digit of ``lam = sum_m b_m 3**-m`` by greedy expansion."""
    rem = lam
    for m in range(k + 1):
        unit = 3.0 ** (-m)
        # admissible remainders: [0, unit/2] for digit 0, [unit, 3*unit/2] for digit 1
        if rem >= unit - tol.eig_cluster:
            digit = 1
        elif rem <= unit / 2 + tol.eig_cluster:
            digit = 0
        else:
            raise SpectralAmbiguity(
                f"eigenvalue {lam:.15g} has no {{0,1}} ternary digit at position {m}",
                eigenvalue=lam, position=m)
        rem -= digit * unit
    return digit


def recover_projection(a, index: int, n_total: int, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Recover ``P_index`` from ``a = sum_k 3**-k P_k`` as a spectral projection of ``a``.

    Eigenvalues are grouped by their ``index``-th ternary digit; for
    ``index = 0`` this is the spectral projection of ``a`` on ``[1, 3/2]``.
    """
    if not 0 <= index < n_total:
        raise SpectralAmbiguity(f"index {index} outside 0..{n_total - 1}", index=index)
    a = as_matrix(a)
    out = np.zeros_like(a)
    for lam, proj in hermitian_eigensystem(a, tol):
        if _ternary_digit(lam, index, tol):
            out = out + proj
    return out


def incompatibility_check(p: PVM, q: PVM, tol: Tolerance = DEFAULT_TOL) -> IncompatibilityReport:
    """Largest commutator between projections of two PVMs.

    ``witness_pair`` holds the indices (into ``p.outcomes`` and
    ``q.outcomes``) of the maximising pair.
    """
    if p.dim != q.dim:
        raise DimensionMismatch(f"PVM dimensions differ: {p.dim} vs {q.dim}")
    best, pair = -1.0, (0, 0)
    for i, a in enumerate(p.projections):
        for j, b in enumerate(q.projections):
            c = max_norm(matrix_commutator(a, b))
            if c > best:
                best, pair = c, (i, j)
    return IncompatibilityReport(best <= tol.abs_eq, best, pair)
