import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussorder.linalg import (
    J2,
    SIGMA,
    HermitianMatrix,
    det2,
    direct_sum,
    herm_eigvals,
    psd_check,
    random_sp2,
    rotation2,
    symplectic_check,
    symplectic_form,
)


def test_symplectic_form_structure():
    assert np.array_equal(SIGMA, symplectic_form(2))
    np.testing.assert_allclose(SIGMA.T, -SIGMA)
    np.testing.assert_allclose(SIGMA @ SIGMA, -np.eye(4))
    np.testing.assert_allclose(symplectic_form(1), J2)


def test_det2_examples():
    assert det2(np.eye(2)) == 1.0
    assert det2(np.diag([2.0, 3.0])) == 6.0
    assert det2(np.array([[0.0, 1.0], [-1.0, 0.0]])) == 1.0


def test_det2_rejects_wrong_shape():
    with pytest.raises(ValueError):
        det2(np.eye(3))


def test_herm_eigvals_identity():
    eigs = herm_eigvals(HermitianMatrix(np.eye(4), np.zeros((4, 4))))
    np.testing.assert_allclose(eigs, [1, 1, 1, 1])


def test_herm_eigvals_vacuum_check():
    eigs = herm_eigvals(HermitianMatrix(np.eye(4), -SIGMA))
    np.testing.assert_allclose(eigs, [0, 0, 2, 2], atol=1e-12)


def test_herm_eigvals_block_shift():
    eigs = herm_eigvals(HermitianMatrix(np.diag([3.0, 3.0, 5.0, 5.0]), -SIGMA))
    np.testing.assert_allclose(eigs, [2, 4, 4, 6], atol=1e-12)


def test_hermitian_matrix_rejects_bad_parts():
    bad_sym = np.eye(4)
    bad_sym[0, 1] = 1.0
    with pytest.raises(ValueError):
        HermitianMatrix(bad_sym, np.zeros((4, 4)))
    with pytest.raises(ValueError):
        HermitianMatrix(np.eye(4), np.eye(4))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_herm_eigvals_ascending_and_trace(seed):
    rng = np.random.default_rng(seed)
    re = rng.normal(size=(4, 4))
    re = re + re.T
    im = rng.normal(size=(4, 4))
    im = im - im.T
    eigs = herm_eigvals(HermitianMatrix(re, im))
    assert np.all(np.diff(eigs) >= 0)
    np.testing.assert_allclose(eigs.sum(), np.trace(re), rtol=1e-10, atol=1e-10)


def test_psd_check_examples():
    assert psd_check(HermitianMatrix(np.eye(4), np.zeros((4, 4))), 1e-9)
    assert not psd_check(HermitianMatrix(np.diag([1.0, 1, 1, -1]), np.zeros((4, 4))), 1e-9)
    assert psd_check(HermitianMatrix(np.eye(4), -SIGMA), 1e-9)


def test_psd_check_rejects_negative_tol():
    with pytest.raises(ValueError):
        psd_check(HermitianMatrix(np.eye(4), np.zeros((4, 4))), -1.0)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.floats(0, 1e-3), st.floats(0, 1e-3))
def test_psd_check_monotone_in_tol(seed, t1, dt):
    rng = np.random.default_rng(seed)
    re = rng.normal(size=(4, 4))
    h = HermitianMatrix(re + re.T, np.zeros((4, 4)))
    if psd_check(h, t1):
        assert psd_check(h, t1 + dt)


def test_symplectic_check_examples():
    assert symplectic_check(np.eye(4))
    assert symplectic_check(np.eye(2))
    assert symplectic_check(np.diag([2.0, 0.5]))
    assert not symplectic_check(np.diag([2.0, 2.0]))


def test_rotation_is_symplectic():
    assert symplectic_check(rotation2(0.7), 1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_random_sp2_contract(seed):
    s = random_sp2(seed, 2.0)
    assert symplectic_check(s, 1e-10)
    assert abs(det2(s) - 1.0) <= 1e-10


def test_random_sp2_deterministic():
    np.testing.assert_array_equal(random_sp2(123, 1.5), random_sp2(123, 1.5))


def test_random_sp2_tiny_squeeze_is_rotation():
    s = random_sp2(5, 1e-15)
    np.testing.assert_allclose(s.T @ s, np.eye(2), atol=1e-12)


def test_random_sp2_rejects_bad_zmax():
    with pytest.raises(ValueError):
        random_sp2(0, 0.0)


def test_direct_sum():
    out = direct_sum(np.diag([1.0, 2.0]), np.diag([3.0, 4.0]))
    np.testing.assert_allclose(out, np.diag([1.0, 2.0, 3.0, 4.0]))
