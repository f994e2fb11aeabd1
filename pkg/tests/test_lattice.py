import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qpaving.errors import DimensionError, InvalidLatticeError, ResourceCapError
from qpaving.lattice import (Lattice, ShapeParam2D, adjoint_lattice, deep_holes_2d, dual_lattice,
                             enumerate_points, hexagonal_lattice, is_symplectic, lattice_to_shape,
                             minimal_vectors, reduce_shape, same_point_set, shape_to_lattice,
                             square_lattice)
from qpaving.phase import PhasePoint, sigma, symplectic_matrix


def brute_force(L, radius, box):
    r = range(-box, box + 1)
    pts = [L.basis @ np.array(k) for k in itertools.product(r, repeat=L.dim)]
    return np.array([p for p in pts if np.linalg.norm(p) <= radius + 1e-9])


def as_set(P, decimals=8):
    return {tuple(np.round(p, decimals) + 0.0) for p in P}


def test_lattice_invariants():
    L = Lattice(np.array([[2.0, 0.3], [0.1, 0.7]]))
    assert L.dim == 2
    assert abs(L.covolume * L.density - 1) < 1e-12
    with pytest.raises(InvalidLatticeError):
        Lattice(np.array([[1.0, 2.0], [2.0, 4.0]]))
    with pytest.raises(InvalidLatticeError):
        Lattice(np.array([[np.nan, 0.0], [0.0, 1.0]]))


def test_symplectic_form():
    J = symplectic_matrix(4)
    assert np.allclose(J.T, -J)
    assert np.allclose(J @ J, -np.eye(4))
    assert sigma([1.0, 0.0], [0.0, 1.0]) == pytest.approx(1.0)
    with pytest.raises(DimensionError):
        symplectic_matrix(3)


def test_phase_point_roundtrip():
    z = PhasePoint.from_array([1.0, 2.0, 3.0, 4.0])
    assert z.d == 2
    assert np.allclose(np.asarray(z), [1, 2, 3, 4])
    with pytest.raises(DimensionError):
        PhasePoint.from_array([1.0, 2.0, 3.0])


def test_dual_examples():
    assert same_point_set(dual_lattice(square_lattice()), square_lattice())
    D = dual_lattice(Lattice(np.diag([2.0, 0.5])))
    assert np.allclose(D.basis, np.diag([0.5, 2.0]))
    H = hexagonal_lattice(1.0)
    Hd = dual_lattice(H)
    assert Hd.covolume == pytest.approx(1.0)
    for M in (H, Hd):
        P = brute_force(M, 2.0, 4)
        n2 = np.einsum("ij,ij->i", P, P)
        m = n2[n2 > 1e-12].min()
        assert np.sum(np.abs(n2 - m) < 1e-9) == 6


def test_adjoint_examples():
    a = 0.8
    assert same_point_set(adjoint_lattice(square_lattice().scaled(a)), square_lattice().scaled(1 / a))
    S = np.array([[1.0, 0.5], [0.0, 1.0]])  # det 1, symplectic in the plane
    assert is_symplectic(S)
    assert same_point_set(adjoint_lattice(Lattice(S)), Lattice(S))
    L = square_lattice().scaled(1 / math.sqrt(2))
    La = adjoint_lattice(L)
    assert same_point_set(La, square_lattice().scaled(math.sqrt(2)))
    P, Q = enumerate_points(L, 4.0), enumerate_points(La, 4.0)
    s = P @ symplectic_matrix(2) @ Q.T
    assert np.max(np.abs(s - np.round(s))) < 1e-9


def test_is_symplectic_examples():
    b = 1.7
    assert is_symplectic(np.eye(4))
    assert is_symplectic(np.diag([b, b, 1 / b, 1 / b]))
    assert not is_symplectic(np.diag([b, 1 / b, b, 1 / b]))
    with pytest.raises(DimensionError):
        is_symplectic(np.eye(3))


def test_enumerate_small_cases():
    P = enumerate_points(square_lattice(), 1.0)
    assert as_set(P) == {(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)}
    H = hexagonal_lattice(1.0)
    P = enumerate_points(H, 1.1)
    assert as_set(P) == as_set(brute_force(H, 1.1, 3))
    assert len(P) == 7
    n2 = np.einsum("ij,ij->i", P, P)
    assert np.allclose(np.sort(n2)[1:], 2 / math.sqrt(3))


def test_enumerate_e8_roots():
    from qpaving.catalog import e8_lattice
    P = enumerate_points(e8_lattice(), 1.5)
    assert len(P) == 241
    n2 = np.einsum("ij,ij->i", P, P)
    assert np.allclose(np.sort(n2)[1:], 2.0)


def test_enumerate_cap():
    with pytest.raises(ResourceCapError) as exc:
        enumerate_points(square_lattice(), 100.0, max_points=1000)
    assert exc.value.cap == 1000


def test_enumerate_deterministic_order():
    L = Lattice(np.array([[1.0, 0.4], [0.2, 0.9]]))
    assert np.array_equal(enumerate_points(L, 3.0), enumerate_points(L, 3.0))


@settings(max_examples=25, deadline=None)
@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2),
       st.floats(0.5, 3.0))
def test_enumeration_properties(a, b, c, d, r):
    B = np.array([[a, b], [c, d]])
    if abs(np.linalg.det(B)) < 0.3 or np.linalg.cond(B) > 8:
        return
    L = Lattice(B)
    P = enumerate_points(L, r)
    assert as_set(P) == as_set(-P)
    assert len(enumerate_points(L, r * 1.2)) >= len(P)
    assert as_set(P) == as_set(brute_force(L, r, 12))


@settings(max_examples=20, deadline=None)
@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2))
def test_dual_and_adjoint_involutions(a, b, c, d):
    B = np.array([[a, b], [c, d]])
    if abs(np.linalg.det(B)) < 0.3 or np.linalg.cond(B) > 8:
        return
    L = Lattice(B)
    assert same_point_set(dual_lattice(dual_lattice(L)), L, 3.0, 1e-10)
    assert same_point_set(adjoint_lattice(adjoint_lattice(L)), L, 3.0, 1e-10)
    assert dual_lattice(L).covolume == pytest.approx(1 / L.covolume)


def _grid_covering_radius(L, n=400):
    # brute-force max of the distance to the lattice over the basis cell
    u = (np.arange(n) + 0.5) / n
    U = np.stack(np.meshgrid(u, u, indexing="ij"), -1).reshape(-1, 2)
    Z = U @ L.basis.T
    P = enumerate_points(L, 4 * L.covering_radius_bound() + np.linalg.norm(L.basis, 2) * 2)
    best = np.full(len(Z), np.inf)
    for p in P:
        best = np.minimum(best, np.linalg.norm(Z - p, axis=1))
    return float(best.max())


def test_deep_holes_square_and_rectangle():
    dh = deep_holes_2d(square_lattice())
    assert dh.covering_radius == pytest.approx(math.sqrt(2) / 2)
    assert len(dh.points) == 1 and np.allclose(np.asarray(dh.points[0]), [0.5, 0.5])
    dh = deep_holes_2d(Lattice(np.diag([2.0, 0.5])))
    assert len(dh.points) == 1 and np.allclose(np.asarray(dh.points[0]), [1.0, 0.25])


def test_deep_holes_hexagonal():
    H = hexagonal_lattice(1.0)
    dh = deep_holes_2d(H)
    edge = math.sqrt(2 / math.sqrt(3))
    assert len(dh.points) == 2
    assert dh.covering_radius == pytest.approx(edge / math.sqrt(3), rel=1e-12)
    assert dh.covering_radius == pytest.approx(_grid_covering_radius(H), abs=5e-3)


def test_deep_holes_rejects_higher_dimension():
    with pytest.raises(DimensionError):
        deep_holes_2d(Lattice(np.eye(4)))


@settings(max_examples=15, deadline=None)
@given(st.floats(-0.5, 0.5), st.floats(0.0, 1.5), st.floats(0.2, 5.0))
def test_shape_to_lattice_density(x, dy, density):
    y = math.sqrt(1 - x * x) + dy
    L = shape_to_lattice(ShapeParam2D(x, y, density))
    assert abs(L.covolume - 1 / density) <= 1e-12 * max(1, 1 / density)
    m2, _ = minimal_vectors(L)
    assert deep_holes_2d(L).covering_radius >= 0.5 * math.sqrt(m2) - 1e-12


def test_shape_examples():
    assert same_point_set(shape_to_lattice(ShapeParam2D(0, 1, 1)), square_lattice())
    H = shape_to_lattice(ShapeParam2D(0.5, math.sqrt(3) / 2, 1))
    m2, vecs = minimal_vectors(H)
    assert m2 == pytest.approx(2 / math.sqrt(3))
    assert len(vecs) == 6
    R = shape_to_lattice(ShapeParam2D(0, 2, 1))
    assert np.allclose(R.basis, np.diag([1 / math.sqrt(2), math.sqrt(2)]))
    with pytest.raises(ValueError):
        shape_to_lattice(ShapeParam2D(0, -1, 1))


def test_reduce_shape_and_inverse():
    x, y = reduce_shape(0.3, 0.5)
    assert abs(x) <= 0.5 and x * x + y * y >= 1 - 1e-12
    s = lattice_to_shape(hexagonal_lattice(2.0))
    assert (s.x, s.y) == pytest.approx((0.5, math.sqrt(3) / 2))
    assert s.density == pytest.approx(2.0)
