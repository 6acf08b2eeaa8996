import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ladderchannel.errors import DimensionError
from ladderchannel.spinops import (
    build_ladder,
    commutator,
    diagonal_observable,
    lagrange_observable,
    magnetic_numbers,
    normal_order_decompose,
    polar_angles,
    tomo_family,
)

from oracles import textbook_spin_matrices


def test_dim_one_is_all_zero():
    lad = build_ladder(1)
    for mat in (lad.j_plus, lad.j_minus, lad.j3):
        assert mat.shape == (1, 1)
        assert mat[0, 0] == 0


def test_dim_two_and_three_entries():
    lad = build_ladder(2)
    np.testing.assert_array_equal(lad.j_plus, [[0, 0], [1, 0]])
    np.testing.assert_array_equal(np.diag(lad.j3), [-0.5, 0.5])
    lad = build_ladder(3)
    np.testing.assert_allclose(np.diag(lad.j_plus, -1), [np.sqrt(2), np.sqrt(2)], atol=1e-15)
    np.testing.assert_array_equal(np.diag(lad.j3), [-1, 0, 1])


@pytest.mark.parametrize("bad", [0, -3, 2.5, "4"])
def test_invalid_dimension(bad):
    with pytest.raises(DimensionError):
        build_ladder(bad)


def test_matrices_are_read_only():
    lad = build_ladder(4)
    with pytest.raises(ValueError):
        lad.j_plus[1, 0] = 5.0


@pytest.mark.parametrize("dim", range(1, 12))
def test_matches_textbook_spin_matrices(dim):
    jp, jm, jz = textbook_spin_matrices(dim)
    lad = build_ladder(dim)
    np.testing.assert_allclose(lad.j_plus, jp, atol=1e-12)
    np.testing.assert_allclose(lad.j_minus, jm, atol=1e-12)
    np.testing.assert_allclose(lad.j3, jz, atol=1e-12)


@given(st.integers(min_value=1, max_value=20))
@settings(max_examples=25, deadline=None)
def test_ladder_algebra(dim):
    lad = build_ladder(dim)
    np.testing.assert_allclose(commutator(lad.j_plus, lad.j_minus), 2 * lad.j3, atol=1e-11)
    np.testing.assert_allclose(commutator(lad.j3, lad.j_plus), lad.j_plus, atol=1e-11)
    np.testing.assert_allclose(commutator(lad.j3, lad.j_minus), -lad.j_minus, atol=1e-11)
    j = (dim - 1) / 2
    np.testing.assert_allclose(lad.casimir(), j * (j + 1) * np.eye(dim), atol=1e-10)


def test_commutator_of_self_vanishes():
    x = np.random.default_rng(0).normal(size=(5, 5))
    assert np.all(commutator(x, x) == 0)


def test_magnetic_numbers():
    np.testing.assert_array_equal(magnetic_numbers(4), [-1.5, -0.5, 0.5, 1.5])


def test_diagonal_observable():
    np.testing.assert_array_equal(diagonal_observable([0.5, 0.5]), 0.5 * np.eye(2))
    np.testing.assert_array_equal(diagonal_observable([-1, 0, 1]), build_ladder(3).j3)
    eigs = np.random.default_rng(1).normal(size=5)
    np.testing.assert_array_equal(np.diag(diagonal_observable(eigs)).real, eigs)
    with pytest.raises(DimensionError):
        diagonal_observable([1, 2], dim=3)


def test_lagrange_constant_and_linear():
    obs = lagrange_observable([2.5] * 4)
    np.testing.assert_allclose(obs.matrix, 2.5 * np.eye(4), atol=1e-12)
    np.testing.assert_allclose(obs.coefficients, [2.5, 0, 0, 0], atol=1e-12)
    obs = lagrange_observable([0.3, 0.9])
    np.testing.assert_allclose(obs.matrix, np.diag([0.3, 0.9]), atol=1e-14)
    assert obs(-0.5) == pytest.approx(0.3)
    assert obs(0.0) == pytest.approx(0.6)


def test_lagrange_matches_direct_diagonal():
    values = np.random.default_rng(2).normal(size=6)
    obs = lagrange_observable(values)
    np.testing.assert_allclose(obs.matrix, diagonal_observable(values), atol=1e-9)
    # the monomial form evaluated on the nodes gives the same values
    poly = np.polynomial.polynomial.polyval(obs.nodes, obs.coefficients)
    np.testing.assert_allclose(poly, values, atol=1e-9)
    # and the polynomial in J3 reproduces the observable
    np.testing.assert_allclose(obs.evaluate_matrix(build_ladder(6).j3), obs.matrix, atol=1e-9)


def test_lagrange_large_dimension_falls_back():
    values = np.linspace(0, 1, 16)
    obs = lagrange_observable(values)
    assert not obs.stable
    assert obs.coefficients is None
    np.testing.assert_allclose(np.diag(obs.matrix).real, values)
    assert obs(0.25) == pytest.approx(np.interp(0.25, obs.nodes, values), abs=1e-6)


def test_family_angles_and_first_member():
    fam = tomo_family(2)
    assert len(fam) == 3
    np.testing.assert_allclose([phi for phi, _ in fam.angles], [0, np.pi / 3, 2 * np.pi / 3])
    np.testing.assert_array_equal(fam.members[0], build_ladder(2).j3)
    np.testing.assert_allclose(polar_angles(4, "pair"), np.arange(5) * np.pi / 2)
    with pytest.raises(DimensionError):
        tomo_family(1)


@pytest.mark.parametrize("dim", [2, 3, 5])
def test_family_commutators(dim):
    lad = build_ladder(dim)
    fam = tomo_family(dim)
    jy_like = (lad.j_plus - lad.j_minus) / 2
    for m, (pm, _) in enumerate(fam.angles):
        for n, (pn, _) in enumerate(fam.angles):
            np.testing.assert_allclose(
                commutator(fam.members[m], fam.members[n]), np.sin(pn - pm) * jy_like, atol=1e-12)


@pytest.mark.parametrize("dim", [2, 3, 4])
def test_family_members_share_the_j3_spectrum(dim):
    want = magnetic_numbers(dim)
    for mode in ("paper_literal", "phase_generalized"):
        for member in tomo_family(dim, mode).members:
            np.testing.assert_allclose(np.linalg.eigvalsh(member), want, atol=1e-12)
    assert len(tomo_family(dim, "phase_generalized")) == 1 + dim * dim


def test_normal_order_identity_and_j3():
    lad = build_ladder(2)
    dec = normal_order_decompose(np.eye(2), lad)
    assert dec.coefficients[(0, 0)] == pytest.approx(1)
    assert all(abs(c) < 1e-12 for k, c in dec.coefficients.items() if k != (0, 0))
    dec = normal_order_decompose(lad.j3, lad)
    # J+ J- = diag(0, 1) at dim 2, so J3 = -I/2 + J+ J-
    assert dec.coefficients[(0, 0)] == pytest.approx(-0.5)
    assert dec.coefficients[(1, 1)] == pytest.approx(1.0)
    np.testing.assert_allclose(dec.reconstruct(lad), lad.j3, atol=1e-12)


def test_normal_order_random_hermitian():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    obs = a + a.conj().T
    lad = build_ladder(3)
    dec = normal_order_decompose(obs, lad)
    assert dec.full_rank
    assert dec.residual < 1e-8
    np.testing.assert_allclose(dec.reconstruct(lad), obs, atol=1e-10)
