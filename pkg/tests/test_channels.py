import numpy as np
import pytest

import gaussorder as go
from conftest import random_blocks, sample_valid_state, sample_valid_xi


def test_map_requires_symmetric_noise():
    g = np.zeros((4, 4))
    g[0, 1] = 1.0
    with pytest.raises(ValueError):
        go.GaussianCPMap(np.eye(4), g)


def test_identity_map_is_noop():
    state = go.two_mode_squeezed(0.4)
    out = go.GaussianCPMap.identity().apply(state)
    np.testing.assert_allclose(out.matrix, state.matrix)


def test_local_noise_addition_example():
    cp_map = go.GaussianCPMap(np.eye(4), np.diag([1.0, 1.0, 0.0, 0.0]))
    out = cp_map.apply(go.from_xi((2, 2, 1, 0.5)))
    np.testing.assert_allclose(out.matrix, go.from_xi((3, 2, 1, 0.5)).matrix, atol=1e-12)


def test_random_cp_maps_preserve_validity():
    rng = np.random.default_rng(13)
    for seed in range(30):
        state = sample_valid_state(rng)
        out = go.sample_cp_map(seed).apply(state)
        assert go.validate(out.matrix, 1e-8)


def test_cp_check_symplectic_is_cp():
    rng = np.random.default_rng(1)
    s1, s2 = random_blocks(rng)
    assert go.cp_check(go.GaussianCPMap(go.direct_sum(s1, s2), np.zeros((4, 4))))


def test_cp_check_negative_noise_fails():
    assert not go.cp_check(go.GaussianCPMap(np.eye(4), -0.1 * np.eye(4)))


def test_cp_check_total_damping():
    assert go.cp_check(go.GaussianCPMap(np.zeros((4, 4)), np.eye(4)))


def test_apply_rejects_non_cp():
    bad = go.GaussianCPMap(np.eye(4), -0.1 * np.eye(4))
    with pytest.raises(go.NotCompletelyPositiveError):
        bad.apply(go.vacuum())


def test_map_dict_round_trip():
    cp_map = go.sample_cp_map(3)
    again = go.GaussianCPMap.from_dict(cp_map.to_dict())
    np.testing.assert_array_equal(again.m, cp_map.m)
    np.testing.assert_array_equal(again.g, cp_map.g)


def test_map_from_dict_accepts_flat_row_major():
    flat = {"m": list(np.eye(4).ravel()), "g": [0.0] * 16}
    cp_map = go.GaussianCPMap.from_dict(flat)
    np.testing.assert_array_equal(cp_map.m, np.eye(4))


def test_map_from_dict_rejects_extra_keys():
    with pytest.raises(ValueError):
        go.GaussianCPMap.from_dict({"m": np.eye(4).tolist(), "g": np.zeros((4, 4)).tolist(), "x": 1})


def test_build_system1_map_identity():
    m = go.build_system1_map((2, 2, 1, 1), (2, 2, 1, 1), 0.0)
    np.testing.assert_allclose(m.m1, np.eye(2))
    np.testing.assert_allclose(m.g1, np.zeros((2, 2)), atol=1e-15)
    np.testing.assert_allclose(m.m2, np.eye(2))


def test_build_system1_map_worked_example():
    m = go.build_system1_map((3, 5, 1, 0.5), (2, 5, 0.4, 0.3), 0.0)
    np.testing.assert_allclose(m.m1, np.diag([0.4, 0.6]), atol=1e-15)
    np.testing.assert_allclose(m.g1, np.diag([1.52, 0.92]), atol=1e-12)


def test_build_system1_map_full_turn_flips_sign():
    m = go.build_system1_map((3, 5, 1, 0.5), (2, 5, 0.4, 0.3), 2.0 * np.pi)
    np.testing.assert_allclose(m.m1, -np.diag([0.4, 0.6]), atol=1e-12)


def test_build_system1_map_transports_normal_form():
    rng = np.random.default_rng(23)
    for _ in range(20):
        src = sample_valid_xi(rng)
        tgt = sample_valid_xi(rng, xi2=src.xi2)
        theta = rng.uniform(-2 * np.pi, 2 * np.pi)
        cp_map = go.build_system1_map(src, tgt, theta).as_cp_map()
        image = cp_map.m.T @ go.from_xi(src).matrix @ cp_map.m + cp_map.g
        np.testing.assert_allclose(image, go.from_xi(tgt).matrix, atol=1e-10)


def test_build_system1_map_guards():
    with pytest.raises(go.DegenerateInvariantError):
        go.build_system1_map((2, 2, 1, 0), (2, 2, 0.5, 0), 0.0)
    with pytest.raises(go.InvariantMismatchError):
        go.build_system1_map((2, 2, 1, 0.5), (2, 3, 1, 0.5), 0.0)
    with pytest.raises(ValueError):
        go.build_system1_map((2, 2, 1, 0.5), (2, 2, 1, 0.5), 7.0)


def test_system1_map_checks_rotation_block():
    with pytest.raises(ValueError):
        go.System1Map(np.eye(2), np.zeros((2, 2)), np.diag([2.0, 0.5]), 0.0)


def test_noise_condition_worked_example():
    nc = go.noise_condition((3, 5, 1, 0.5), (2, 5, 0.4, 0.3), 0.0)
    assert abs(nc.det - 0.8208) < 1e-12
    assert abs(nc.trace - (2 * 2 - 3 * 0.52)) < 1e-12


def test_noise_condition_self_pair():
    nc = go.noise_condition((2, 2, 1, 1), (2, 2, 1, 1), 0.0)
    assert nc.trace == 0.0
    assert nc.det == 0.0


def test_noise_condition_matches_built_map():
    # det identity against the assembled matrices at random theta
    rng = np.random.default_rng(9)
    for _ in range(20):
        src = sample_valid_xi(rng)
        tgt = sample_valid_xi(rng, xi2=src.xi2)
        theta = rng.uniform(-2 * np.pi, 2 * np.pi)
        m = go.build_system1_map(src, tgt, theta)
        nc = go.noise_condition(src, tgt, theta)
        d = go.det2(m.m1)
        det_direct = go.det2(m.g1) - (1.0 - d) ** 2
        tr_direct = float(np.trace(m.g1))
        scale = 1.0 + max(abs(nc.det), abs(nc.trace))
        assert abs(det_direct - nc.det) <= 1e-9 * scale
        assert abs(tr_direct - nc.trace) <= 1e-9 * scale


def test_minimality_identity_map():
    assert go.is_minimal_noise(go.GaussianCPMap.identity()) is True


def test_minimality_pure_noise_is_not_minimal():
    assert go.is_minimal_noise(go.GaussianCPMap(np.eye(4), np.eye(4))) is False


def test_minimality_indeterminate_support():
    # Full-rank commutator defect but rank-2 noise: the defining equation
    # cannot be evaluated.
    cp_map = go.GaussianCPMap(0.5 * np.eye(4), np.diag([1.0, 1.0, 0.0, 0.0]))
    assert go.is_minimal_noise(cp_map) is None
