"""Random instance generators shared by the test modules."""
import numpy as np
from scipy.stats import unitary_group

from holevokit.algebra import atoms_from_projections


def haar_unitary(d, rng):
    if d == 1:
        return np.exp(2j * np.pi * rng.random()) * np.eye(1)
    return unitary_group.rvs(d, random_state=rng)


def random_hermitian(d, rng):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (g + g.conj().T) / 2


def random_partition(d, rng):
    """Random composition of ``d`` into positive block sizes."""
    cuts = np.flatnonzero(rng.random(d - 1) < 0.5) + 1
    edges = np.concatenate([[0], cuts, [d]])
    return [int(b - a) for a, b in zip(edges[:-1], edges[1:])]


def random_atoms(d, rng, sizes=None):
    """Atom projections (in a random basis) and their ranks."""
    sizes = random_partition(d, rng) if sizes is None else sizes
    v = haar_unitary(d, rng)
    atoms, start = [], 0
    for r in sizes:
        cols = v[:, start:start + r]
        atoms.append(cols @ cols.conj().T)
        start += r
    return atoms, sizes


def separating_generators(atoms):
    """Unions of atoms indexed by the binary digits of the atom index.

    The generated algebra has exactly the given atoms, yet no generator is
    itself an atom in general.
    """
    k = len(atoms)
    bits = max(1, int(np.ceil(np.log2(k)))) if k > 1 else 0
    gens = []
    for b in range(bits):
        gens.append(sum(q for j, q in enumerate(atoms) if (j >> b) & 1))
    return gens


def random_algebra(d, rng, sizes=None):
    atoms, sizes = random_atoms(d, rng, sizes)
    alg = atoms_from_projections(separating_generators(atoms), dim=d)
    return alg, sorted(sizes)


def random_simplex_point(k, rng, zeros=True):
    p = rng.dirichlet(np.ones(k))
    if zeros and k > 1 and rng.random() < 0.3:
        p[rng.integers(k)] = 0.0
        p = p / p.sum()
    return p
