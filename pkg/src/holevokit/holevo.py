"""Indiscernibility classes and their simplex coordinates.

For an abelian algebra with atoms ``Q_1..Q_k`` a state is represented by
its atom probabilities ``p_j = tr(Q_j rho)``. Two states are indiscernible
exactly when these vectors agree, and every point of the probability simplex
is realised by some pure state.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .algebra import AbelianAlgebra
from .errors import DimensionMismatch, IndexMismatch, InvalidState, NotInAlgebra
from .numerics import DEFAULT_TOL, Tolerance, as_matrix, max_norm
from .observables import PVM, measurement_distribution
from .states import PureState, as_density

__all__ = [
    "HolevoPoint",
    "CyclicVector",
    "Indiscernibility",
    "ClassicalSystem",
    "ClassicalQuotient",
    "density_vector",
    "indiscernible",
    "indiscernible_family",
    "cyclic_vector",
    "state_from_density",
    "bhattacharyya",
    "quotient_hs_distance",
    "hellinger_sq",
    "overlap_form_distance_sq",
    "lift_observable",
    "classical_quotient",
    "random_commutant_unitaries",
    "quotient_distance_search",
]


@dataclass(frozen=True, eq=False)
class HolevoPoint:
    """Probability vector over the atoms of an algebra."""

    probabilities: np.ndarray
    tol: Tolerance = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float).reshape(-1)
        if p.size == 0 or not np.all(np.isfinite(p)):
            raise InvalidState("probabilities must be a nonempty finite vector")
        if np.any(p < -self.tol.abs_eq):
            raise InvalidState("probabilities must be nonnegative", probabilities=p.tolist())
        if abs(p.sum() - 1) > self.tol.abs_eq:
            raise InvalidState(f"probabilities sum to {p.sum():.12g}", total=float(p.sum()))
        p = np.clip(p, 0.0, None)
        p.setflags(write=False)
        object.__setattr__(self, "probabilities", p)

    def __len__(self):
        return self.probabilities.shape[0]


@dataclass(frozen=True, eq=False)
class CyclicVector:
    vector: PureState
    atom_masses: np.ndarray


@dataclass(frozen=True)
class Indiscernibility:
    equal: bool
    max_deviation: float


def _as_point(p) -> HolevoPoint:
    return p if isinstance(p, HolevoPoint) else HolevoPoint(p)


def density_vector(alg: AbelianAlgebra, state) -> HolevoPoint:
    """Atom probabilities ``tr(Q_j rho)`` of a pure or mixed state."""
    rho = as_density(state)
    if rho.dim != alg.dim:
        raise DimensionMismatch(f"state dimension {rho.dim} does not match algebra dimension {alg.dim}",
                                state_dim=rho.dim, algebra_dim=alg.dim)
    probs = [np.trace(q @ rho.matrix).real for q in alg.projections]
    return HolevoPoint(probs, alg.tol)


def indiscernible(alg: AbelianAlgebra, s1, s2, tol: Tolerance = DEFAULT_TOL) -> Indiscernibility:
    p1 = density_vector(alg, s1).probabilities
    p2 = density_vector(alg, s2).probabilities
    dev = float(np.max(np.abs(p1 - p2)))
    return Indiscernibility(dev <= tol.abs_eq, dev)


def indiscernible_family(pvms, s1, s2, tol: Tolerance = DEFAULT_TOL) -> Indiscernibility:
    """Compare the outcome statistics of each PVM separately.

    This is weaker than :func:`indiscernible` on the algebra generated by all
    the PVMs: joint statistics (correlations between PVMs) are not compared.
    Two local spin measurements on a pair of qubits are the standard case.
    """
    dev = 0.0
    for p in pvms:
        if not isinstance(p, PVM):
            raise DimensionMismatch("indiscernible_family expects PVMs")
        d1 = measurement_distribution(p, s1)
        d2 = measurement_distribution(p, s2)
        dev = max(dev, float(np.max(np.abs(d1 - d2))))
    return Indiscernibility(dev <= tol.abs_eq, dev)


def cyclic_vector(alg: AbelianAlgebra, seed) -> CyclicVector:
    """Unit vector with mass ``2**-n / sum_m 2**-m`` on atom ``n`` (n = 1, 2, ...)."""
    rng = np.random.default_rng(seed)
    k = len(alg)
    weights = 2.0 ** (-np.arange(1, k + 1) / 2)
    h0 = np.zeros(alg.dim, dtype=complex)
    for w, q in zip(weights, alg.projections):
        while True:
            g = q @ (rng.standard_normal(alg.dim) + 1j * rng.standard_normal(alg.dim))
            norm = np.linalg.norm(g)
            if norm > 1e-6:
                break
        h0 += w * g / norm
    masses = weights**2 / np.sum(weights**2)
    return CyclicVector(PureState.normalized(h0, alg.tol), masses)


def state_from_density(alg: AbelianAlgebra, target, h0: CyclicVector) -> PureState:
    """Pure state with atom probabilities ``target``, built from the cyclic vector ``h0``.

    Each atom component of ``h0`` is rescaled by ``sqrt(target_j / mass_j)``.
    """
    t = _as_point(target).probabilities
    if t.shape[0] != len(alg):
        raise IndexMismatch(f"target has {t.shape[0]} entries, algebra has {len(alg)} atoms")
    v = h0.vector.amplitudes
    h = sum(np.sqrt(tj / mj) * (q @ v) for tj, mj, q in zip(t, h0.atom_masses, alg.projections))
    return PureState.normalized(h, alg.tol)


def _pair(p, q):
    p, q = _as_point(p).probabilities, _as_point(q).probabilities
    if p.shape != q.shape:
        raise IndexMismatch(f"atom index sets differ in size: {p.shape[0]} vs {q.shape[0]}")
    return p, q


def bhattacharyya(p, q) -> float:
    p, q = _pair(p, q)
    return float(np.sum(np.sqrt(p * q)))


def quotient_hs_distance(p, q) -> float:
    """Smallest Hilbert-Schmidt distance between pure representatives of two classes.

    Equal to ``sqrt(2 (1 - BC^2))`` where ``BC`` is the Bhattacharyya
    coefficient of the atom probabilities. ``1 - BC^2`` is evaluated as
    ``H^2 (1 + BC)`` with the squared Hellinger distance ``H^2 = 1 - BC``
    summed directly, avoiding cancellation for nearby classes.
    """
    bc = min(1.0, bhattacharyya(p, q))
    return float(np.sqrt(2.0 * hellinger_sq(p, q) * (1.0 + bc)))


def hellinger_sq(p, q) -> float:
    """Squared Hellinger distance ``0.5 * sum (sqrt p - sqrt q)^2``."""
    p, q = _pair(p, q)
    return float(0.5 * np.sum((np.sqrt(p) - np.sqrt(q)) ** 2))


def overlap_form_distance_sq(p, q) -> float:
    """``2 (1 - BC)``, i.e. twice the squared Hellinger distance.

    Reported next to :func:`quotient_hs_distance`; the two agree only when
    ``BC`` is 0 or 1.
    """
    return 2.0 * (1.0 - bhattacharyya(p, q))


def lift_observable(alg: AbelianAlgebra, a, p, tol: Tolerance = DEFAULT_TOL) -> complex:
    """Value of the lifted observable ``a`` at the class with atom probabilities ``p``.

    Raises
    ------
    NotInAlgebra
        If ``a`` is not a linear combination of the atoms.
    """
    a = as_matrix(a)
    if a.shape != (alg.dim, alg.dim):
        raise DimensionMismatch(f"observable shape {a.shape} does not match algebra dimension {alg.dim}")
    p = _as_point(p).probabilities
    if p.shape[0] != len(alg):
        raise IndexMismatch(f"point has {p.shape[0]} entries, algebra has {len(alg)} atoms")
    coeffs = [np.trace(a @ q) / r for q, r in alg.atoms]
    residual = max_norm(a - sum(c * q for c, q in zip(coeffs, alg.projections)))
    if residual > tol.abs_eq:
        raise NotInAlgebra(f"observable is not in the algebra (residual {residual:.3e})",
                           residual=residual)
    return complex(np.dot(coeffs, p))


@dataclass(frozen=True)
class ClassicalSystem:
    """Finite sample space with observables given as callables or mappings."""

    points: tuple
    observables: tuple = ()

    def values(self, x) -> tuple:
        return tuple(f(x) if callable(f) else f[x] for f in self.observables)


@dataclass(frozen=True)
class ClassicalQuotient:
    classes: tuple

    def class_of(self, x) -> tuple:
        for c in self.classes:
            if x in c:
                return c
        raise KeyError(x)

    def witness(self, x1, x2) -> dict:
        """Transposition of ``x1`` and ``x2`` as a permutation of all points.

        Raises ``ValueError`` if the points are not equivalent.
        """
        if x2 not in self.class_of(x1):
            raise ValueError(f"{x1!r} and {x2!r} are distinguishable")
        perm = {x: x for c in self.classes for x in c}
        perm[x1], perm[x2] = x2, x1
        return perm


def classical_quotient(sys: ClassicalSystem) -> ClassicalQuotient:
    """Partition points by equality of all observable values (first-seen order)."""
    groups: dict = {}
    for x in sys.points:
        groups.setdefault(sys.values(x), []).append(x)
    return ClassicalQuotient(tuple(tuple(g) for g in groups.values()))


def _atom_bases(alg: AbelianAlgebra):
    bases = []
    for q, r in alg.atoms:
        w, v = np.linalg.eigh((q + q.conj().T) / 2)
        bases.append(v[:, -r:])
    return bases


def _small_unitaries(n, r, rng, scale):
    """``n`` random r x r unitaries; Haar when ``scale`` is None, else near identity."""
    g = rng.standard_normal((n, r, r)) + 1j * rng.standard_normal((n, r, r))
    if scale is not None:
        g = np.eye(r) + scale * g
    q, rr = np.linalg.qr(g)
    d = np.diagonal(rr, axis1=1, axis2=2)
    return q * (d / np.abs(d))[:, None, :]


def random_commutant_unitaries(alg: AbelianAlgebra, n: int, rng, scale=None) -> np.ndarray:
    """Stack of ``n`` block-diagonal unitaries, one random block per atom."""
    rng = np.random.default_rng(rng)
    out = np.zeros((n, alg.dim, alg.dim), dtype=complex)
    for b in _atom_bases(alg):
        blocks = _small_unitaries(n, b.shape[1], rng, scale)
        out += b[None] @ blocks @ b.conj().T[None]
    return out


def _search(alg, hp, hq, trials, seed):
    rng = np.random.default_rng(seed)

    def distances(us):
        ov = np.abs(np.einsum("i,nij,j->n", hp.conj(), us, hq)) ** 2
        return np.sqrt(np.clip(2.0 * (1.0 - ov), 0.0, None))

    n_global = max(1, trials // 10)
    us = random_commutant_unitaries(alg, n_global, rng)
    dist = distances(us)
    k = int(np.argmin(dist))
    best_u, best = us[k], float(dist[k])
    used, scale, batch = n_global, 0.3, 16
    while used < trials:
        n = min(batch, trials - used)
        steps = random_commutant_unitaries(alg, n, rng, scale)
        cand = steps @ best_u[None]
        dist = distances(cand)
        used += n
        k = int(np.argmin(dist))
        if dist[k] < best:
            best_u, best = cand[k], float(dist[k])
            scale = min(1.0, scale * 1.5)
        else:
            scale = max(1e-9, scale * 0.5)
    return best


def quotient_distance_search(alg: AbelianAlgebra, p, q, trials: int = 10_000, seed=0,
                             workers: int = 1) -> float:
    """Brute-force estimate of the quotient Hilbert-Schmidt distance.

    Representatives of the two classes are built from independent cyclic
    vectors, then ``hs_distance(h_p, U h_q)`` is minimised over random
    block-per-atom unitaries ``U`` of the commutant: a global Haar sample
    followed by a randomised local search around the incumbent. Trials are
    split across ``workers`` independent searches with spawned seeds and the
    results are min-reduced. The closed form is not used.
    """
    ss = np.random.SeedSequence(seed)
    rep_seed, *search_seeds = ss.spawn(1 + workers)
    r1, r2 = np.random.default_rng(rep_seed).integers(0, 2**63, size=2)
    hp = state_from_density(alg, p, cyclic_vector(alg, int(r1))).amplitudes
    hq = state_from_density(alg, q, cyclic_vector(alg, int(r2))).amplitudes
    per = [trials // workers + (1 if i < trials % workers else 0) for i in range(workers)]
    if workers == 1:
        results = [_search(alg, hp, hq, per[0], search_seeds[0])]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda a: _search(alg, hp, hq, *a), zip(per, search_seeds)))
    return min(results)
