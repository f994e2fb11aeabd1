import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qpaving.errors import DomainTruncationError, NotAFrameError
from qpaving.gabor import (FrameBounds, ambiguity_gauss, condition_a_upper, energy_lower_bound,
                           frame_operator_bounds, gaussian, gram_entries, gram_matrix,
                           gram_spectral_bounds, hermite, janssen_frame_bounds,
                           numeric_frame_check, relaxed_bounds, stft_many, stft_quadrature,
                           tensor_frame_check, tensor_lattices, tf_shifted_gaussian)
from qpaving.gabor.functions import SampledFunction, make_grid, modulate, tf_shift, translate
from qpaving.lattice import (Lattice, adjoint_lattice, enumerate_points, hexagonal_lattice,
                             square_lattice)
from qpaving.theta import TruncationPolicy

TH_HALF = math.fsum(math.exp(-math.pi * k * k / 2) for k in range(-8, 9))
TH_ONE = math.fsum(math.exp(-math.pi * k * k) for k in range(-6, 7))


# -- sampled functions and quadrature -------------------------------------------------

def test_windows_are_orthonormal():
    phi, h1, h2 = gaussian(), hermite(1), hermite(2)
    assert phi.norm() == pytest.approx(1.0, abs=1e-13)
    assert h1.norm() == pytest.approx(1.0, abs=1e-13)
    assert abs(phi.inner(h1)) < 1e-13
    assert abs(phi.inner(h2)) < 1e-13


def test_stft_quadrature_examples():
    phi, h1 = gaussian(), hermite(1)
    assert abs(stft_quadrature(phi, phi, [0, 0]) - 1) <= 1e-12
    assert abs(stft_quadrature(phi, phi, [1, 1]) + math.exp(-math.pi)) <= 1e-12
    assert abs(stft_quadrature(h1, phi, [0, 0])) <= 1e-12


def test_quadrature_requires_decay():
    t = make_grid(1 / 32, 2.0)
    wide = SampledFunction(np.exp(-0.1 * t * t), t)
    with pytest.raises(DomainTruncationError):
        stft_quadrature(wide, wide, [0, 0])


def test_sampled_shifts_match_closed_forms():
    phi = gaussian()
    z = (0.7, -1.3)
    a = tf_shift(phi, z).samples
    b = tf_shifted_gaussian(z).samples
    assert np.max(np.abs(a - b)) < 1e-12
    s = SampledFunction(phi.samples, phi.t)  # no closed form: FFT shift
    assert np.max(np.abs(translate(s, 0.3).samples - translate(phi, 0.3).samples)) < 1e-10
    assert np.allclose(modulate(phi, 2.0).samples,
                       np.exp(4j * math.pi * phi.t) * phi.samples)


# -- ambiguity function -----------------------------------------------------------------

def test_ambiguity_examples():
    assert ambiguity_gauss([0.0, 0.0]) == 1
    v = ambiguity_gauss([1.0, 0.0])
    assert v.real == pytest.approx(math.exp(-math.pi / 2), abs=1e-15)
    assert v.imag == 0
    assert abs(v) == pytest.approx(0.20788, abs=1e-5)


@settings(max_examples=50, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3))
def test_ambiguity_modulus_and_symmetry(x, w):
    z = np.array([x, w])
    v = ambiguity_gauss(z)
    assert abs(abs(v) ** 2 - math.exp(-math.pi * (x * x + w * w))) < 1e-15
    # V_g g(-z) = exp(-2 pi i x w) conj(V_g g(z))
    assert abs(ambiguity_gauss(-z) - np.exp(-2j * math.pi * x * w) * np.conj(v)) < 1e-14
    if x * x + w * w > 1e-6:
        assert abs(v) < 1


def test_ambiguity_matches_quadrature():
    rng = np.random.default_rng(7)
    Z = rng.uniform(-3, 3, size=(100, 2))
    phi = gaussian()
    assert np.max(np.abs(stft_many(phi, phi, Z) - ambiguity_gauss(Z))) <= 1e-10


# -- Gram matrices -----------------------------------------------------------------------

def test_gram_phase_against_quadrature():
    rng = np.random.default_rng(11)
    P = rng.uniform(-2, 2, size=(10, 2))
    Q = rng.uniform(-2, 2, size=(10, 2))
    G = gram_entries(P, Q)
    phi = gaussian()
    for i, j in zip(range(10), rng.permutation(10)):
        oracle = stft_quadrature(tf_shifted_gaussian(Q[j]), phi, P[i])
        assert abs(G[i, j] - oracle) <= 1e-10


def test_gram_examples():
    G = gram_matrix(square_lattice(), 0.1)
    assert G.entries.shape == (1, 1) and G.entries[0, 0] == 1
    G = gram_matrix(square_lattice(), 1.0)
    E = G.entries
    assert E.shape == (5, 5)
    assert np.allclose(E, E.conj().T, atol=1e-12)
    assert np.all(np.diag(E) == 1)
    off = np.abs(E[~np.eye(5, dtype=bool)])
    # neighbours at distance 1 and sqrt(2) and 2
    D = np.linalg.norm(G.index_map[:, None] - G.index_map[None, :], axis=-1)[~np.eye(5, dtype=bool)]
    assert np.allclose(off, np.exp(-math.pi * D ** 2 / 2))
    assert np.allclose(off[np.isclose(D, 1)], math.exp(-math.pi / 2))


def test_gram_positive_semidefinite():
    rng = np.random.default_rng(2)
    for _ in range(3):
        B = rng.normal(size=(2, 2))
        L = Lattice(B).with_density(rng.uniform(0.5, 3))
        assert gram_matrix(L, 2.5).eigenvalues()[0] >= -1e-12


# -- frame bounds ------------------------------------------------------------------------

def test_janssen_square_matches_product_sums():
    n = range(-6, 7)
    th = math.fsum(math.exp(-2 * math.pi * k * k) for k in n)
    alt = math.fsum((-1) ** k * math.exp(-2 * math.pi * k * k) for k in n)
    fb = janssen_frame_bounds(square_lattice(2.0))
    assert fb.method == "janssen-exact"
    assert abs(fb.A - 2 * alt * alt) <= 1e-9
    assert abs(fb.B - 2 * th * th) <= 1e-9
    assert fb.ratio == pytest.approx(1.01505, abs=1e-5)
    assert fb.A <= 2.0 <= fb.B


def test_janssen_hexagonal():
    H = hexagonal_lattice(2.0)
    fb = janssen_frame_bounds(H)
    P = enumerate_points(adjoint_lattice(H), 8.0)
    direct = math.fsum(np.exp(-math.pi * np.einsum("ij,ij->i", P, P))) / H.covolume
    assert abs(fb.B - direct) <= 1e-10
    assert fb.B == pytest.approx(2.00848, abs=1e-5)
    assert fb.ratio < janssen_frame_bounds(square_lattice(2.0)).ratio
    assert fb.A <= 2.0 <= fb.B


def test_janssen_labels_and_errors():
    fb = janssen_frame_bounds(hexagonal_lattice(3.0))
    assert fb.method == "janssen-heuristic"
    with pytest.raises(NotAFrameError):
        janssen_frame_bounds(square_lattice(1.0))
    with pytest.raises(NotAFrameError):
        janssen_frame_bounds(square_lattice(0.5))


def test_frame_bounds_validation():
    with pytest.raises(ValueError):
        FrameBounds(0.0, 1.0, "relaxed")
    with pytest.raises(ValueError):
        FrameBounds(2.0, 1.0, "relaxed")
    with pytest.raises(ValueError):
        FrameBounds(1.0, 2.0, "nonsense")
    row = FrameBounds(1.0, 2.0, "relaxed", 0.0, 2.0, "x").as_row()
    assert row["ratio"] == 2.0


def test_condition_a_and_energy_examples():
    L = square_lattice(2.0)
    assert condition_a_upper(L) == pytest.approx(2 * TH_ONE ** 2, abs=1e-11)
    assert condition_a_upper(L) == pytest.approx(2.36068, abs=1e-5)
    assert condition_a_upper(square_lattice(1.0)) == pytest.approx(TH_HALF ** 2, abs=1e-11)
    assert TH_HALF ** 2 == pytest.approx(2.01497, abs=1e-5)
    assert energy_lower_bound(square_lattice(1.0)) == pytest.approx(TH_ONE ** 2, abs=1e-11)
    assert energy_lower_bound(L) == pytest.approx(TH_HALF ** 2, abs=1e-11)


def test_operator_bounds_bracket_gram_sections():
    for L in (square_lattice(2.0), hexagonal_lattice(2.0)):
        op = frame_operator_bounds(L)
        prev = None
        for r in (3.0, 5.0):
            gs = gram_spectral_bounds(L, r)
            assert op.A - 1e-9 <= gs.A <= gs.B <= op.B + 1e-9
            if prev is not None:
                assert gs.A <= prev.A + 1e-12 and gs.B >= prev.B - 1e-12
            prev = gs


def test_operator_bounds_square_closed_form():
    # weights exp(-pi |l|^2 / 2) on sqrt(2) Z^2 factorise into 1-D sums
    n = range(-8, 9)
    th = math.fsum(math.exp(-math.pi * k * k) for k in n)
    alt = math.fsum((-1) ** k * math.exp(-math.pi * k * k) for k in n)
    op = frame_operator_bounds(square_lattice(2.0))
    assert op.A == pytest.approx(2 * alt ** 2, abs=1e-9)
    assert op.B == pytest.approx(2 * th ** 2, abs=1e-9)
    assert op.ratio == pytest.approx(math.sqrt(2), abs=1e-9)


def test_gram_single_point_gives_density():
    gs = gram_spectral_bounds(square_lattice(2.0), 0.1)
    assert gs.A == gs.B == pytest.approx(2.0)
    with pytest.raises(NotAFrameError):
        gram_spectral_bounds(square_lattice(1.0))


def test_relaxed_bounds_square():
    fb = relaxed_bounds(square_lattice(1.0))
    assert fb.B == pytest.approx(TH_ONE ** 2, abs=1e-11)
    half = math.fsum(math.exp(-math.pi * (k + 0.5) ** 2) for k in range(-7, 7))
    assert fb.A == pytest.approx(half ** 2, abs=1e-10)


def test_relaxed_hexagonal_beats_square():
    h = relaxed_bounds(hexagonal_lattice(1.0))
    s = relaxed_bounds(square_lattice(1.0))
    assert h.B < s.B and h.A > s.A


def test_tensor_examples():
    r = tensor_frame_check(0.9, 1.0)
    assert (r.lambda1_is_frame, r.lambda2_is_frame) == (True, True)
    r = tensor_frame_check(0.9, 1.2)
    assert (r.lambda1_is_frame, r.lambda2_is_frame) == (True, False)
    assert not tensor_frame_check(1.1, 0.7).lambda1_is_frame
    L1, L2 = tensor_lattices(0.8, 1.3)
    assert L1.density == pytest.approx(L2.density)


@pytest.mark.parametrize("alpha,beta", [(0.7, 1.0), (0.9, 1.5), (0.6, 1.5), (1.1, 1.0)])
def test_tensor_numeric_agreement(alpha, beta):
    r = tensor_frame_check(alpha, beta)
    L1, L2 = tensor_lattices(alpha, beta)
    assert numeric_frame_check(L1) == r.lambda1_is_frame
    assert numeric_frame_check(L2) == r.lambda2_is_frame
