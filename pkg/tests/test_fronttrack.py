"""Lagrangian front tracker: densities, pressure, velocities, stepping."""
import numpy as np
import pytest

from crossdiff1d import (
    DegenerateDensityError,
    DegenerateJacobianError,
    FrontState,
    InterfaceTrajectory,
    LotkaVolterra,
    ModelParams,
    PressureSolution,
    TangledMeshError,
    barenblatt,
    barenblatt_dx,
    barenblatt_split_front,
    BarenblattProfile,
    build_uniform_mesh,
    current_density,
    eta_closed_form,
    front_step,
    interface_velocity,
    node_velocities,
    resample_front,
    run_front,
    segregation_defect,
    side_mass,
    solve_pressure,
)

TRAJ = InterfaceTrajectory(x0=0.5, t_star=1.0)
DARCY = ModelParams(a=(1.0, 1.0))


def flat_state(spacing_scale=1.0):
    """Uniform chains with unit reference density; J = spacing_scale."""
    s = 0.1
    minus = np.linspace(0.0, 1.0, 11) * spacing_scale
    plus = minus[-1] + np.linspace(0.0, 0.4, 5) * spacing_scale
    return FrontState(
        t=0.0,
        eta=minus[-1],
        nodes_minus=minus,
        nodes_plus=plus,
        ref_density_minus=np.ones(11),
        ref_density_plus=np.ones(5),
        ref_spacing_minus=s,
        ref_spacing_plus=s,
    )


def test_state_validation():
    good = flat_state()
    with pytest.raises(ValueError):
        FrontState(
            t=0.0,
            eta=0.9,  # not glued
            nodes_minus=good.nodes_minus,
            nodes_plus=good.nodes_plus,
            ref_density_minus=good.ref_density_minus,
            ref_density_plus=good.ref_density_plus,
            ref_spacing_minus=0.1,
            ref_spacing_plus=0.1,
        )
    with pytest.raises(ValueError):
        FrontState(
            t=0.0,
            eta=1.0,
            nodes_minus=np.array([0.0, 0.5, 0.4, 1.0]),  # not increasing
            nodes_plus=good.nodes_plus,
            ref_density_minus=np.ones(4),
            ref_density_plus=good.ref_density_plus,
            ref_spacing_minus=0.1,
            ref_spacing_plus=0.1,
        )
    with pytest.raises(ValueError):
        FrontState(
            t=0.0,
            eta=1.0,
            nodes_minus=np.array([0.0, 1.0]),  # too short
            nodes_plus=good.nodes_plus,
            ref_density_minus=np.ones(2),
            ref_density_plus=good.ref_density_plus,
            ref_spacing_minus=0.1,
            ref_spacing_plus=0.1,
        )


def test_current_density_identity_deformation():
    st = flat_state()
    assert np.allclose(current_density(st, "minus"), 1.0)
    assert np.allclose(current_density(st, "plus"), 1.0)


def test_current_density_uniform_dilation():
    st = flat_state(spacing_scale=2.0)
    assert np.allclose(current_density(st, "minus"), 0.5)
    assert np.allclose(current_density(st, "plus"), 0.5)


def test_current_density_degenerate_jacobian():
    st = FrontState(
        t=0.0,
        eta=2e-4,
        nodes_minus=np.array([0.0, 1e-4, 2e-4]),
        nodes_plus=np.array([2e-4, 1.0, 2.0]),
        ref_density_minus=np.ones(3),
        ref_density_plus=np.ones(3),
        ref_spacing_minus=1.0,
        ref_spacing_plus=1.0,
    )
    with pytest.raises(DegenerateJacobianError):
        current_density(st, "minus")


def test_side_mass_of_flat_state():
    st = flat_state()
    assert side_mass(st, "minus") == pytest.approx(1.0)
    assert side_mass(st, "plus") == pytest.approx(0.4)


def test_pressure_zero_reaction():
    st = flat_state()
    p = solve_pressure(st, "minus", np.zeros(11))
    assert np.allclose(p.values, 0.0)
    assert p.side == "minus"


def test_pressure_unit_density_unit_reaction():
    # -p_xx = 1 on (0,1) with p(0) = p(1) = 0: p = x(1-x)/2, max 1/8
    st = flat_state()
    p = solve_pressure(st, "minus", np.ones(11))
    x = st.nodes_minus
    assert np.max(np.abs(p.values - 0.5 * x * (1.0 - x))) < 1e-14
    assert p.values.max() == pytest.approx(0.125)
    assert p.values[0] == 0.0
    assert p.values[-1] == 0.0


def test_pressure_symmetric_data():
    st = flat_state()
    f = np.sin(np.pi * st.nodes_minus)
    p = solve_pressure(st, "minus", f).values
    assert np.max(np.abs(p - p[::-1])) < 1e-12


def test_pressure_degenerate_density():
    st = flat_state()
    ref = st.ref_density_plus.copy()
    ref[2] = 0.0
    bad = FrontState(
        t=0.0,
        eta=st.eta,
        nodes_minus=st.nodes_minus,
        nodes_plus=st.nodes_plus,
        ref_density_minus=st.ref_density_minus,
        ref_density_plus=ref,
        ref_spacing_minus=0.1,
        ref_spacing_plus=0.1,
    )
    with pytest.raises(DegenerateDensityError):
        solve_pressure(bad, "plus", np.ones(5))


def test_pressure_reaction_validation():
    st = flat_state()
    with pytest.raises(ValueError):
        solve_pressure(st, "minus", np.ones(4))
    with pytest.raises(ValueError):
        solve_pressure(st, "sideways", np.ones(11))


def test_node_velocities_flat_density():
    st = flat_state()
    p = solve_pressure(st, "minus", np.zeros(11))
    assert np.allclose(node_velocities(st, "minus", p, 1.0), 0.0)


def test_node_velocities_ignore_pressure_offset():
    # only pressure slopes matter, so a constant shift changes nothing
    st = flat_state()
    base = solve_pressure(st, "minus", np.ones(11))
    shifted = PressureSolution(side="minus", values=base.values + 3.0)
    v0 = node_velocities(st, "minus", base, 1.0)
    v1 = node_velocities(st, "minus", shifted, 1.0)
    assert np.allclose(v0, v1)


def test_node_velocities_side_mismatch():
    st = flat_state()
    p = solve_pressure(st, "minus", np.zeros(11))
    with pytest.raises(ValueError):
        node_velocities(st, "plus", p, 1.0)


def test_interface_velocity_on_split_profile():
    # on the exact split parabola the quadratic end slope is exact, so the
    # tracked speed matches the closed-form law to rounding
    p_prof = BarenblattProfile(t_star=1.0)
    st = barenblatt_split_front(TRAJ)
    pm = solve_pressure(st, "minus", np.zeros_like(st.nodes_minus))
    pp = solve_pressure(st, "plus", np.zeros_like(st.nodes_plus))
    v = interface_velocity(st, pp, pm, 1.0)
    exact = -barenblatt_dx(np.array([0.5]), 0.0, p_prof)[0]
    assert exact == pytest.approx(0.5 / 3.0)
    assert abs(v - exact) < 1e-10


def test_interface_velocity_symmetric_profile_is_stationary():
    st = barenblatt_split_front(InterfaceTrajectory(x0=0.0, t_star=1.0))
    pm = solve_pressure(st, "minus", np.zeros_like(st.nodes_minus))
    pp = solve_pressure(st, "plus", np.zeros_like(st.nodes_plus))
    assert abs(interface_velocity(st, pp, pm, 1.0)) < 1e-12


def test_interface_velocity_minus_side_agrees():
    # evaluating the Darcy law from the minus side must give the same speed
    # up to rounding on the exact parabola
    p_prof = BarenblattProfile(t_star=1.0)
    st = barenblatt_split_front(TRAJ)
    w_m = current_density(st, "minus")
    x_m = st.nodes_minus
    coeffs = np.polyfit(x_m[-3:], w_m[-3:], 2)
    slope_minus = 2.0 * coeffs[0] * x_m[-1] + coeffs[1]
    v_minus = -1.0 * slope_minus
    exact = -barenblatt_dx(np.array([0.5]), 0.0, p_prof)[0]
    assert abs(v_minus - exact) < 1e-10


def test_interface_velocity_argument_order():
    st = barenblatt_split_front(TRAJ)
    pm = solve_pressure(st, "minus", np.zeros_like(st.nodes_minus))
    pp = solve_pressure(st, "plus", np.zeros_like(st.nodes_plus))
    with pytest.raises(ValueError):
        interface_velocity(st, pm, pp, 1.0)


def test_front_node_velocity_near_interface():
    # two-point one-sided slope at the interface node carries an O(spacing)
    # bias relative to the closed-form speed
    st = barenblatt_split_front(TRAJ)
    pp = solve_pressure(st, "plus", np.zeros_like(st.nodes_plus))
    v = node_velocities(st, "plus", pp, 1.0)
    assert abs(v[0] - 0.5 / 3.0) < 0.5 * st.ref_spacing_plus


def test_front_step_flat_state_is_stationary():
    st = flat_state()
    nxt = front_step(st, DARCY, 1e-3)
    assert nxt.t == pytest.approx(1e-3)
    assert nxt.eta == st.eta
    assert np.array_equal(nxt.nodes_minus, st.nodes_minus)
    assert np.array_equal(nxt.nodes_plus, st.nodes_plus)


def test_front_step_validation():
    st = flat_state()
    with pytest.raises(ValueError):
        front_step(st, DARCY, 0.0)
    with pytest.raises(ValueError):
        front_step(st, DARCY, 1e-3, pressure_sign=0)


def test_front_step_tangles_on_huge_step():
    st = barenblatt_split_front(TRAJ)
    with pytest.raises(TangledMeshError):
        front_step(st, DARCY, 0.05)


def test_front_tracks_closed_form_interface():
    st = barenblatt_split_front(TRAJ)
    m_minus0 = side_mass(st, "minus")
    m_plus0 = side_mass(st, "plus")
    times, etas, final = run_front(st, DARCY, 1e-4, 0.1)
    assert len(times) == 1001
    assert etas[0] == 0.5
    exact = eta_closed_form(0.1, TRAJ)
    assert abs(etas[-1] - exact) < 1e-2
    assert abs(side_mass(final, "minus") - m_minus0) < 1e-12
    assert abs(side_mass(final, "plus") - m_plus0) < 1e-12


def test_front_step_stable_under_halved_dt():
    # if a step size survives a horizon, half that step size must too
    st = barenblatt_split_front(TRAJ)
    s = st
    for _ in range(100):
        s = front_step(s, DARCY, 2e-4)
    s = st
    for _ in range(200):
        s = front_step(s, DARCY, 1e-4)
    assert s.t == pytest.approx(0.02)


def test_front_step_with_reactions_and_sign():
    lv = LotkaVolterra(alpha=(1.0, 1.0), beta=((1.0, 0.0), (0.0, 1.0)))
    params = ModelParams(a=(1.0, 1.0), lv=lv)
    st = barenblatt_split_front(TRAJ)
    plusward = front_step(st, params, 1e-4, pressure_sign=1)
    minusward = front_step(st, params, 1e-4, pressure_sign=-1)
    assert plusward.eta != minusward.eta


def test_resample_front_segregates():
    st = barenblatt_split_front(TRAJ)
    mesh = build_uniform_mesh(-6.0, 6.0, 400)
    u1, u2 = resample_front(st, mesh)
    left = mesh.nodes < st.eta - mesh.h
    right = mesh.nodes > st.eta + mesh.h
    assert np.max(u1.values[left]) == 0.0
    assert np.max(u2.values[right]) == 0.0
    assert segregation_defect(u1, u2) <= 4.0 * mesh.h
    inside = np.abs(mesh.nodes) < 2.0
    total = (u1.values + u2.values)[inside]
    profile = barenblatt(mesh.nodes[inside], 0.0, BarenblattProfile(1.0))
    assert np.max(np.abs(total - profile)) < 5e-3


def test_run_front_zero_horizon():
    st = barenblatt_split_front(TRAJ)
    times, etas, final = run_front(st, DARCY, 1e-4, 0.0)
    assert len(times) == 1
    assert etas[0] == 0.5
    assert final is st


def test_split_front_construction():
    st = barenblatt_split_front(TRAJ, n_per_side=40, margin=0.5)
    assert st.eta == 0.5
    assert st.nodes_minus[-1] == 0.5
    assert st.nodes_plus[0] == 0.5
    assert st.nodes_minus.size == 41
    assert st.nodes_plus.size == 41
    r0 = np.sqrt(12.0)
    assert st.nodes_minus[0] == pytest.approx(-(r0 - 0.5))
    assert st.nodes_plus[-1] == pytest.approx(r0 - 0.5)
    assert np.all(st.ref_density_minus > 0)
    assert np.all(st.ref_density_plus > 0)


def test_split_front_validation():
    with pytest.raises(ValueError):
        barenblatt_split_front(TRAJ, n_per_side=2)
    with pytest.raises(ValueError):
        barenblatt_split_front(TRAJ, margin=0.0)
    with pytest.raises(ValueError):
        barenblatt_split_front(TRAJ, margin=100.0)
