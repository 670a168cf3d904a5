"""Model parameters, reactions, cutoff, and regularized flux coefficients."""
import numpy as np
import pytest

from crossdiff1d import (
    FeField,
    LotkaVolterra,
    MeshMismatchError,
    ModelParams,
    build_uniform_mesh,
    cutoff,
    gaussian_bump_initial,
    lv_reaction,
    regularized_flux_coefficients,
)

LV_PRESET = LotkaVolterra(alpha=(1.0, 5.0), beta=((1.0, 0.5), (1.0, 2.0)))


def test_lotka_volterra_validation():
    with pytest.raises(ValueError):
        LotkaVolterra(alpha=(np.inf, 0.0), beta=((0.0, 0.0), (0.0, 0.0)))
    with pytest.raises(ValueError):
        LotkaVolterra(alpha=(0.0, 0.0), beta=((0.0, np.nan), (0.0, 0.0)))
    # negative coefficients are legal (growth/cooperation signs are free)
    LotkaVolterra(alpha=(-1.0, 0.0), beta=((0.0, -2.0), (0.0, 0.0)))
    z = LotkaVolterra.zero()
    assert z.alpha == (0.0, 0.0)


def test_model_params_validation():
    with pytest.raises(ValueError):
        ModelParams(a=(-1.0, 1.0))
    with pytest.raises(ValueError):
        ModelParams(a=(1.0, 1.0), c=(0.0, -0.5))
    with pytest.raises(ValueError):
        ModelParams(a=(1.0, 1.0), delta=-1e-3)
    with pytest.raises(ValueError):
        ModelParams(a=(1.0, 1.0), epsilon=0.0)
    with pytest.raises(ValueError):
        ModelParams(a=(1.0, 1.0), b=(np.inf, 0.0))
    # drift may be negative
    ModelParams(a=(1.0, 1.0), b=(-2.0, 0.0))


def test_lv_reaction_equilibria():
    # (1, 0) is a steady state of species 1: 1*(1 - 1*1 - 0.5*0) = 0
    assert lv_reaction(1, 1.0, 0.0, LV_PRESET) == pytest.approx(0.0)
    # (0, 2.5) is a steady state of species 2: 2.5*(5 - 0 - 2*2.5) = 0
    assert lv_reaction(2, 0.0, 2.5, LV_PRESET) == pytest.approx(0.0)


def test_lv_reaction_vanishes_with_species():
    rng = np.random.default_rng(1)
    for _ in range(50):
        other = rng.uniform(0.0, 10.0)
        assert lv_reaction(1, 0.0, other, LV_PRESET) == 0.0
        assert lv_reaction(2, other, 0.0, LV_PRESET) == 0.0


def test_lv_reaction_broadcasts():
    u1 = np.array([0.0, 1.0, 2.0])
    u2 = np.array([1.0, 0.0, 1.0])
    f1 = lv_reaction(1, u1, u2, LV_PRESET)
    expected = u1 * (1.0 - u1 - 0.5 * u2)
    assert np.allclose(f1, expected)


def test_lv_reaction_bad_species_index():
    with pytest.raises(ValueError):
        lv_reaction(3, 1.0, 1.0, LV_PRESET)


def test_cutoff_values():
    assert cutoff(-0.3, 1e-3) == 0.0
    assert cutoff(0.7, 0.01) == pytest.approx(0.7)
    assert cutoff(150.0, 0.01) == pytest.approx(100.0)


def test_cutoff_properties():
    rng = np.random.default_rng(8)
    eps = 0.05
    for _ in range(50):
        s, t = rng.uniform(-50, 50, size=2)
        cs, ct = cutoff(s, eps), cutoff(t, eps)
        if s <= t:
            assert cs <= ct
        assert abs(cs - ct) <= abs(s - t) + 1e-15
        if 0.0 <= s <= 1.0 / eps:
            assert cs == s


def test_cutoff_rejects_bad_epsilon():
    with pytest.raises(ValueError):
        cutoff(1.0, 0.0)
    with pytest.raises(ValueError):
        cutoff(1.0, -1.0)


def test_flux_coefficients_zero_fields():
    mesh = build_uniform_mesh(0.0, 1.0, 6)
    z = FeField(mesh, np.zeros(7))
    params = ModelParams(a=(1.0, 2.0), delta=0.0)
    blocks, drift = regularized_flux_coefficients(z, z, params)
    assert blocks.shape == (6, 2, 2)
    assert np.allclose(blocks, 0.0)
    assert np.allclose(drift, 0.0)


def test_flux_coefficients_single_species_block():
    # u1 = 1, u2 = 0, a1 = 1, no regularization: block rows are [1, 1], [0, 0]
    mesh = build_uniform_mesh(0.0, 1.0, 4)
    u1 = FeField(mesh, np.ones(5))
    u2 = FeField(mesh, np.zeros(5))
    params = ModelParams(a=(1.0, 3.0), delta=0.0)
    blocks, _ = regularized_flux_coefficients(u1, u2, params)
    for e in range(4):
        assert np.allclose(blocks[e], [[1.0, 1.0], [0.0, 0.0]])


def test_flux_coefficients_delta_and_c_terms():
    mesh = build_uniform_mesh(0.0, 1.0, 2)
    u1 = FeField(mesh, np.full(3, 2.0))
    u2 = FeField(mesh, np.full(3, 1.0))
    params = ModelParams(a=(1.0, 2.0), c=(0.1, 0.2), delta=0.5)
    blocks, _ = regularized_flux_coefficients(u1, u2, params)
    # ub1 = 2, ub2 = 1, ub = 3, delta/2 = 0.25
    expected = np.array(
        [
            [1.0 * 2 + 0.1 + 0.25 * (3 + 2), 1.0 * 2 + 0.25 * 2],
            [2.0 * 1 + 0.25 * 1, 2.0 * 1 + 0.2 + 0.25 * (3 + 1)],
        ]
    )
    assert np.allclose(blocks[0], expected)
    assert np.allclose(blocks[1], expected)


def test_flux_coefficients_element_averaging_then_clamp():
    # alternating +/-v nodal values average to zero per element, so the
    # clamped averages carry no coupling at all
    mesh = build_uniform_mesh(0.0, 1.0, 4)
    osc = FeField(mesh, np.array([1.0, -1.0, 1.0, -1.0, 1.0]))
    zero = FeField(mesh, np.zeros(5))
    params = ModelParams(a=(1.0, 1.0), delta=1.0)
    blocks, _ = regularized_flux_coefficients(osc, zero, params)
    assert np.allclose(blocks, 0.0)


def test_flux_coefficients_spectrum_floor():
    # with u1 + u2 >= m everywhere, every block's eigenvalues have real part
    # at least (delta/2) * m
    rng = np.random.default_rng(21)
    for _ in range(40):
        n = int(rng.integers(2, 30))
        mesh = build_uniform_mesh(0.0, 1.0, n)
        v1 = rng.uniform(0.0, 5.0, n + 1)
        v2 = rng.uniform(0.0, 5.0, n + 1)
        u1, u2 = FeField(mesh, v1), FeField(mesh, v2)
        delta = float(rng.uniform(1e-4, 1e-1))
        params = ModelParams(
            a=(rng.uniform(0, 3), rng.uniform(0, 3)),
            c=(rng.uniform(0, 1), rng.uniform(0, 1)),
            delta=delta,
        )
        blocks, _ = regularized_flux_coefficients(u1, u2, params)
        ub = 0.5 * (v1[:-1] + v1[1:]) + 0.5 * (v2[:-1] + v2[1:])
        for e in range(n):
            eig_min = np.linalg.eigvals(blocks[e]).real.min()
            assert eig_min >= 0.5 * delta * ub[e] - 1e-12


def test_flux_coefficients_drift_term():
    mesh = build_uniform_mesh(0.0, 1.0, 2)
    u1 = FeField(mesh, np.full(3, 2.0))
    u2 = FeField(mesh, np.full(3, 4.0))
    q = FeField(mesh, np.array([0.5, 0.0, -0.5]))
    params = ModelParams(a=(1.0, 1.0), b=(3.0, 7.0), q_field=q)
    _, drift = regularized_flux_coefficients(u1, u2, params)
    q_elem = np.array([0.25, -0.25])
    assert np.allclose(drift[:, 0], 3.0 * q_elem * 2.0)
    assert np.allclose(drift[:, 1], 7.0 * q_elem * 4.0)


def test_flux_coefficients_mesh_mismatch():
    u1 = FeField(build_uniform_mesh(0.0, 1.0, 4), np.ones(5))
    u2 = FeField(build_uniform_mesh(0.0, 2.0, 4), np.ones(5))
    with pytest.raises(MeshMismatchError):
        regularized_flux_coefficients(u1, u2, ModelParams(a=(1.0, 1.0)))


def test_gaussian_bump_peak_and_decay():
    mesh = build_uniform_mesh(0.0, 1.0, 1000)
    u = gaussian_bump_initial(mesh, 0.4, 0.001)
    i_peak = np.argmax(u.values)
    assert mesh.nodes[i_peak] == pytest.approx(0.4)
    assert u.values[i_peak] == pytest.approx(1.0)
    assert u.values[0] < 1e-30
    assert u.values[-1] < 1e-30


def test_gaussian_bump_rejects_bad_width():
    mesh = build_uniform_mesh(0.0, 1.0, 10)
    with pytest.raises(ValueError):
        gaussian_bump_initial(mesh, 0.5, 0.0)
    with pytest.raises(ValueError):
        gaussian_bump_initial(mesh, np.inf, 0.1)
