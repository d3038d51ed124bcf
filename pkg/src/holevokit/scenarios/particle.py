"""Position observables of a particle on a cell grid (1 to 3 axes).

A :class:`GridDensity` stores cell probabilities, not point samples, so
marginals, cylinder-set lifts and Hellinger quantities are exact on the
discrete model.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr

from ..errors import BadAxes, BadCells, GridMismatch, InvalidState
from ..numerics import DEFAULT_TOL, Tolerance

__all__ = [
    "GridDensity",
    "GridHellinger",
    "grid_marginal",
    "grid_lift",
    "grid_hellinger",
    "gaussian_grid",
    "grid_from_amplitudes",
]


@dataclass(frozen=True, eq=False)
class GridDensity:
    axes: tuple
    masses: np.ndarray
    tol: Tolerance = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        axes = tuple(np.asarray(e, dtype=float) for e in self.axes)
        if not 1 <= len(axes) <= 3:
            raise BadAxes(f"need 1 to 3 axes, got {len(axes)}")
        for i, e in enumerate(axes):
            if e.ndim != 1 or e.size < 2 or np.any(np.diff(e) <= 0):
                raise BadAxes(f"axis {i} edges must be strictly increasing with >= 2 entries")
        shape = tuple(e.size - 1 for e in axes)
        m = np.asarray(self.masses, dtype=float)
        if m.size != int(np.prod(shape)):
            raise BadAxes(f"{m.size} masses do not fit grid shape {shape}")
        m = m.reshape(shape)
        if np.any(m < -self.tol.abs_eq) or abs(m.sum() - 1) > self.tol.abs_eq:
            raise InvalidState("grid masses must be nonnegative and sum to 1", total=float(m.sum()))
        m = np.clip(m, 0.0, None)
        m.setflags(write=False)
        for e in axes:
            e.setflags(write=False)
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "masses", m)

    @property
    def ndim(self) -> int:
        return len(self.axes)


@dataclass(frozen=True)
class GridHellinger:
    hellinger_sq: float
    paper_dsq: float
    bhattacharyya: float


def grid_marginal(g: GridDensity, axes_to_keep) -> GridDensity:
    """Sum out every axis not listed in ``axes_to_keep``."""
    keep = sorted(set(int(a) for a in axes_to_keep))
    if not keep or any(a < 0 or a >= g.ndim for a in keep):
        raise BadAxes(f"axes_to_keep must be a nonempty subset of 0..{g.ndim - 1}", axes=keep)
    drop = tuple(a for a in range(g.ndim) if a not in keep)
    m = g.masses.sum(axis=drop) if drop else g.masses
    return GridDensity(tuple(g.axes[a] for a in keep), m, g.tol)


def grid_lift(g: GridDensity, axis: int, cells) -> float:
    """Probability that the coordinate along ``axis`` falls in the given cells."""
    if not 0 <= axis < g.ndim:
        raise BadAxes(f"axis {axis} outside 0..{g.ndim - 1}", axis=axis)
    marginal = grid_marginal(g, [axis]).masses
    idx = np.unique(np.asarray(list(cells), dtype=int))
    if idx.size and (idx.min() < 0 or idx.max() >= marginal.size):
        raise BadCells(f"cell indices must lie in 0..{marginal.size - 1}", cells=idx.tolist())
    return float(marginal[idx].sum())


def grid_hellinger(g1: GridDensity, g2: GridDensity) -> GridHellinger:
    if len(g1.axes) != len(g2.axes) or any(
            a.shape != b.shape or not np.array_equal(a, b) for a, b in zip(g1.axes, g2.axes)):
        raise GridMismatch("grids differ")
    s1, s2 = np.sqrt(g1.masses), np.sqrt(g2.masses)
    h2 = float(0.5 * np.sum((s1 - s2) ** 2))
    return GridHellinger(h2, 2.0 * h2, float(np.sum(s1 * s2)))


def gaussian_grid(axes, means=None, sds=None) -> GridDensity:
    """Product Gaussian discretised by exact cell integrals, renormalised to the grid."""
    axes = [np.asarray(e, dtype=float) for e in axes]
    means = np.zeros(len(axes)) if means is None else np.asarray(means, dtype=float)
    sds = np.ones(len(axes)) if sds is None else np.asarray(sds, dtype=float)
    factors = [np.diff(ndtr((e - mu) / sd)) for e, mu, sd in zip(axes, means, sds)]
    m = factors[0]
    for f in factors[1:]:
        m = np.multiply.outer(m, f)
    return GridDensity(tuple(axes), m / m.sum())


def grid_from_amplitudes(axes, amplitudes) -> GridDensity:
    """Class of a discretised wavefunction: cell masses ``|psi|^2`` normalised."""
    a = np.abs(np.asarray(amplitudes, dtype=complex)) ** 2
    if a.sum() == 0:
        raise InvalidState("wavefunction vanishes on the grid")
    return GridDensity(tuple(axes), a / a.sum())
