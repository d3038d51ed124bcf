import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from holevokit.algebra import atoms_from_projections
from holevokit.errors import DimensionMismatch, IndexMismatch, InvalidState, NotInAlgebra
from holevokit.holevo import (
    ClassicalSystem,
    HolevoPoint,
    bhattacharyya,
    classical_quotient,
    cyclic_vector,
    density_vector,
    hellinger_sq,
    indiscernible,
    lift_observable,
    overlap_form_distance_sq,
    quotient_distance_search,
    quotient_hs_distance,
    random_commutant_unitaries,
    state_from_density,
)
from holevokit.scenarios.qubit import qubit_state, z_algebra
from holevokit.states import DensityMatrix, PureState, basis_state, density_from_pure, random_pure
from helpers import random_algebra, random_simplex_point

R2 = 1 / np.sqrt(2)
S3 = np.diag([1.0, -1.0])


def test_holevo_point_validation():
    with pytest.raises(InvalidState):
        HolevoPoint([0.5, 0.6])
    with pytest.raises(InvalidState):
        HolevoPoint([1.1, -0.1])
    assert HolevoPoint([1.0, -1e-12]).probabilities[1] == 0.0


def test_density_vector_examples():
    z = z_algebra()
    np.testing.assert_allclose(density_vector(z, PureState([R2, R2])).probabilities, [0.5, 0.5])
    scal = atoms_from_projections([], dim=3)
    np.testing.assert_allclose(density_vector(scal, random_pure(3, 1)).probabilities, [1.0])
    np.testing.assert_allclose(density_vector(z, DensityMatrix(np.diag([0.75, 0.25]))).probabilities,
                               [0.75, 0.25])
    with pytest.raises(DimensionMismatch):
        density_vector(z, random_pure(3, 0))


def test_indiscernible_examples():
    z = z_algebra()
    assert indiscernible(z, qubit_state(1.0, 0.2), qubit_state(1.0, 2.5)).equal
    r = indiscernible(z, qubit_state(0.0), qubit_state(np.pi))
    assert not r.equal and r.max_deviation == pytest.approx(1.0)
    full = atoms_from_projections([np.diag(e) for e in np.eye(3)])
    v = random_pure(3, 4).amplitudes
    # rank-one atoms separate distinct basis states but not relative phases
    assert not indiscernible(full, basis_state(3, 0), basis_state(3, 1)).equal
    assert indiscernible(full, PureState(v), PureState(np.abs(v))).equal


def test_cyclic_vector_examples():
    two = cyclic_vector(z_algebra(), 0)
    np.testing.assert_allclose(two.atom_masses, [2 / 3, 1 / 3])
    np.testing.assert_allclose(density_vector(z_algebra(), two.vector).probabilities, [2 / 3, 1 / 3], atol=1e-12)
    one = cyclic_vector(atoms_from_projections([], dim=2), 0)
    np.testing.assert_allclose(one.atom_masses, [1.0])
    three = atoms_from_projections([np.diag(e) for e in np.eye(3)])
    np.testing.assert_allclose(cyclic_vector(three, 5).atom_masses, [4 / 7, 2 / 7, 1 / 7])


def test_state_from_density_examples():
    z = z_algebra()
    h0 = cyclic_vector(z, 1)
    # masses (1/2, 1/2) need equal weights: build h0 by hand
    from holevokit.holevo import CyclicVector
    flat = CyclicVector(PureState([R2, R2]), np.array([0.5, 0.5]))
    assert state_from_density(z, [0.5, 0.5], flat) == flat.vector
    h = state_from_density(z, [1.0, 0.0], h0)
    np.testing.assert_allclose(density_vector(z, h).probabilities, [1.0, 0.0], atol=1e-15)
    g = random_pure(2, 9)
    back = state_from_density(z, density_vector(z, g), h0)
    assert indiscernible(z, back, g).equal


def test_metric_examples():
    assert quotient_hs_distance([0.3, 0.7], [0.3, 0.7]) == pytest.approx(0.0, abs=1e-7)
    assert quotient_hs_distance([1, 0], [0, 1]) == pytest.approx(np.sqrt(2))
    assert quotient_hs_distance([0.5, 0.5], [1, 0]) == pytest.approx(1.0, abs=1e-15)
    assert hellinger_sq([0.3, 0.7], [0.3, 0.7]) == 0.0
    assert hellinger_sq([1, 0], [0, 1]) == pytest.approx(1.0)
    assert hellinger_sq([0.5, 0.5], [1, 0]) == pytest.approx(1 - R2, abs=1e-15)
    assert overlap_form_distance_sq([0.5, 0.5], [1, 0]) == pytest.approx(2 - np.sqrt(2), abs=1e-15)
    with pytest.raises(IndexMismatch):
        bhattacharyya([1.0], [0.5, 0.5])


def test_lift_examples():
    z = z_algebra()
    for theta in np.linspace(0, np.pi, 7):
        p = [np.cos(theta / 2) ** 2, np.sin(theta / 2) ** 2]
        assert lift_observable(z, S3, p) == pytest.approx(2 * p[0] - 1, abs=1e-12)
        assert lift_observable(z, np.eye(2), p) == pytest.approx(1.0, abs=1e-12)
    half = [np.cos(np.pi / 4) ** 2, np.sin(np.pi / 4) ** 2]
    assert lift_observable(z, np.diag([1, 0]), half) == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(NotInAlgebra):
        lift_observable(z, np.array([[0, 1], [1, 0]]), half)


def test_classical_quotient_examples():
    parity = classical_quotient(ClassicalSystem((1, 2, 3), (lambda x: x % 2,)))
    assert parity.classes == ((1, 3), (2,))
    assert classical_quotient(ClassicalSystem((1, 2, 3))).classes == ((1, 2, 3),)
    assert classical_quotient(ClassicalSystem((1, 2, 3), (lambda x: x,))).classes == ((1,), (2,), (3,))
    u = parity.witness(1, 3)
    assert u == {1: 3, 2: 2, 3: 1}
    with pytest.raises(ValueError):
        parity.witness(1, 2)


@settings(max_examples=40, deadline=None)
@given(points=st.lists(st.integers(0, 30), min_size=1, max_size=12, unique=True),
       mods=st.lists(st.integers(1, 5), max_size=3))
def test_classical_witness_preserves_observables(points, mods):
    fs = tuple((lambda m: (lambda x: x % m))(m) for m in mods)
    quo = classical_quotient(ClassicalSystem(tuple(points), fs))
    for c in quo.classes:
        for x1 in c:
            for x2 in c:
                u = quo.witness(x1, x2)
                assert u[x1] == x2
                assert sorted(u.values()) == sorted(points)
                for f in fs:
                    assert all(f(u[x]) == f(x) for x in points)


@settings(max_examples=40, deadline=None)
@given(d=st.integers(1, 6), seed=st.integers(0, 2**32 - 1))
def test_indiscernibility_is_an_equivalence(d, seed):
    rng = np.random.default_rng(seed)
    alg, _ = random_algebra(d, rng)
    h = random_pure(d, rng)
    us = random_commutant_unitaries(alg, 2, rng)
    h1 = PureState.normalized(us[0] @ h.amplitudes)
    h2 = PureState.normalized(us[1] @ h1.amplitudes)
    assert indiscernible(alg, h, h).equal
    assert indiscernible(alg, h, h1).equal == indiscernible(alg, h1, h).equal
    assert indiscernible(alg, h, h1).equal and indiscernible(alg, h1, h2).equal
    assert indiscernible(alg, h, h2).equal


@settings(max_examples=40, deadline=None)
@given(d=st.integers(1, 8), seed=st.integers(0, 2**32 - 1))
def test_simplex_surjectivity(d, seed):
    rng = np.random.default_rng(seed)
    alg, _ = random_algebra(d, rng)
    assert len(alg) <= d
    t = random_simplex_point(len(alg), rng)
    h = state_from_density(alg, t, cyclic_vector(alg, seed))
    np.testing.assert_allclose(density_vector(alg, h).probabilities, t, atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(d=st.integers(1, 6), seed=st.integers(0, 2**32 - 1), lam=st.floats(0, 1))
def test_density_vector_is_affine(d, seed, lam):
    rng = np.random.default_rng(seed)
    alg, _ = random_algebra(d, rng)
    r1 = density_from_pure(random_pure(d, rng)).matrix
    r2 = density_from_pure(random_pure(d, rng)).matrix
    mix = DensityMatrix(lam * r1 + (1 - lam) * r2)
    expected = lam * density_vector(alg, DensityMatrix(r1)).probabilities + (1 - lam) * density_vector(
        alg, DensityMatrix(r2)).probabilities
    np.testing.assert_allclose(density_vector(alg, mix).probabilities, expected, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(k=st.integers(1, 6), seed=st.integers(0, 2**32 - 1))
def test_metric_identities(k, seed):
    rng = np.random.default_rng(seed)
    p, q = random_simplex_point(k, rng), random_simplex_point(k, rng)
    h2 = hellinger_sq(p, q)
    assert abs(h2 - (1 - bhattacharyya(p, q))) <= 1e-15
    assert quotient_hs_distance(p, q) ** 2 == pytest.approx(2 * (1 - (1 - h2) ** 2), abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(d=st.integers(1, 6), seed=st.integers(0, 2**32 - 1))
def test_lift_matches_expectation(d, seed):
    rng = np.random.default_rng(seed)
    alg, _ = random_algebra(d, rng)
    coeffs = rng.standard_normal(len(alg))
    a = sum(c * q for c, q in zip(coeffs, alg.projections))
    h = random_pure(d, rng)
    p = density_vector(alg, h)
    assert lift_observable(alg, a, p) == pytest.approx(np.vdot(h.amplitudes, a @ h.amplitudes), abs=1e-9)


def test_quotient_search_approaches_closed_form():
    alg = atoms_from_projections([np.diag([1, 1, 0, 0])])
    p, q = [0.2, 0.8], [0.6, 0.4]
    best = quotient_distance_search(alg, p, q, trials=2000, seed=3)
    closed = quotient_hs_distance(p, q)
    assert closed - 1e-9 <= best <= closed + 1e-3
    assert quotient_distance_search(alg, p, q, trials=2000, seed=3, workers=3) >= closed - 1e-9
