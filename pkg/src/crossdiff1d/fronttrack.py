"""Lagrangian front tracking for the segregated two-species configuration.

Species 2 occupies the minus side (left of the interface), species 1 the plus
side. Each side carries labeled nodes with a frozen reference density: the
conservation identity w(X(y,t), t) * J(y,t) = w0(y) recovers the current
density from the deformation Jacobian J, so transport conserves each side's
mass to rounding. Node velocities follow the modified Darcy law

    v = -a_side * dw/dx + dp/dx,

with the pressure solving -(w p_x)_x = f on each side (p = 0 at both side
endpoints, exact 1D closed form). The interface node moves with the plus-side
one-sided evaluation of the same law; outer endpoints stay pinned (far-field
rest frame), so accuracy is local to the interface and a compression layer at
the pinned ends is expected and harmless over the tracked horizons.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import (
    DegenerateDensityError,
    DegenerateJacobianError,
    TangledMeshError,
)
from .mesh_fem import FeField, Mesh1D
from .model import ModelParams, lv_reaction
from .oracle import BarenblattProfile, InterfaceTrajectory, barenblatt, support_radius

Side = Literal["minus", "plus"]

# Node spacing at or below this fraction of the reference spacing counts as a
# degenerate deformation even before nodes actually cross.
JACOBIAN_FLOOR = 1e-3


@dataclass(frozen=True, eq=False)
class FrontState:
    """Two node chains glued at the interface, with frozen reference densities."""

    t: float
    eta: float
    nodes_minus: np.ndarray
    nodes_plus: np.ndarray
    ref_density_minus: np.ndarray
    ref_density_plus: np.ndarray
    ref_spacing_minus: float
    ref_spacing_plus: float

    def __post_init__(self):
        if not (np.isfinite(self.t) and np.isfinite(self.eta)):
            raise ValueError("time and interface position must be finite")
        for name in ("ref_spacing_minus", "ref_spacing_plus"):
            s = getattr(self, name)
            if not (np.isfinite(s) and s > 0):
                raise ValueError(f"{name} must be finite and > 0, got {s}")
        for side in ("minus", "plus"):
            nodes = np.array(getattr(self, f"nodes_{side}"), dtype=float)
            ref = np.array(getattr(self, f"ref_density_{side}"), dtype=float)
            if nodes.ndim != 1 or nodes.size < 3:
                raise ValueError(f"nodes_{side} needs at least 3 nodes")
            if not np.all(np.isfinite(nodes)):
                raise ValueError(f"nodes_{side} contains non-finite positions")
            if np.any(np.diff(nodes) <= 0):
                raise ValueError(f"nodes_{side} must be strictly increasing")
            if ref.shape != nodes.shape:
                raise ValueError(f"ref_density_{side} must match nodes_{side}")
            if not np.all(np.isfinite(ref)) or np.any(ref < 0):
                raise ValueError(f"ref_density_{side} must be finite and >= 0")
            nodes.flags.writeable = False
            ref.flags.writeable = False
            object.__setattr__(self, f"nodes_{side}", nodes)
            object.__setattr__(self, f"ref_density_{side}", ref)
        if self.nodes_minus[-1] != self.eta or self.nodes_plus[0] != self.eta:
            raise ValueError("sides must be glued: nodes_minus[-1] == eta == nodes_plus[0]")

    def side_nodes(self, side: Side) -> np.ndarray:
        return self.nodes_minus if side == "minus" else self.nodes_plus

    def side_ref_density(self, side: Side) -> np.ndarray:
        return self.ref_density_minus if side == "minus" else self.ref_density_plus

    def side_ref_spacing(self, side: Side) -> float:
        return self.ref_spacing_minus if side == "minus" else self.ref_spacing_plus


@dataclass(frozen=True, eq=False)
class PressureSolution:
    """Nodal pressure on one side; zero at both side endpoints by construction."""

    side: Side
    values: np.ndarray


def _check_side(side: str) -> None:
    if side not in ("minus", "plus"):
        raise ValueError(f"side must be 'minus' or 'plus', got {side!r}")


def _jacobian(nodes: np.ndarray, ref_spacing: float) -> np.ndarray:
    """Centered discrete deformation Jacobian, one-sided at the chain ends."""
    dx = np.diff(nodes)
    if np.any(dx <= JACOBIAN_FLOOR * ref_spacing):
        raise DegenerateJacobianError(
            f"node spacing fell to {dx.min():.3e} "
            f"(floor {JACOBIAN_FLOOR * ref_spacing:.3e})"
        )
    j = np.empty(nodes.size)
    j[1:-1] = (nodes[2:] - nodes[:-2]) / (2.0 * ref_spacing)
    j[0] = dx[0] / ref_spacing
    j[-1] = dx[-1] / ref_spacing
    return j


def current_density(state: FrontState, side: Side) -> np.ndarray:
    """Nodal density on one side: reference density over the discrete Jacobian."""
    _check_side(side)
    j = _jacobian(state.side_nodes(side), state.side_ref_spacing(side))
    return state.side_ref_density(side) / j


def side_mass(state: FrontState, side: Side) -> float:
    """Trapezoid mass of one side in the deformed configuration."""
    _check_side(side)
    x = state.side_nodes(side)
    w = current_density(state, side)
    weights = np.empty(x.size)
    weights[1:-1] = 0.5 * (x[2:] - x[:-2])
    weights[0] = 0.5 * (x[1] - x[0])
    weights[-1] = 0.5 * (x[-1] - x[-2])
    return float(np.dot(weights, w))


def solve_pressure(
    state: FrontState, side: Side, reaction: np.ndarray
) -> PressureSolution:
    """Solve -(w p_x)_x = f on one side with p = 0 at both side endpoints.

    `reaction` holds nodal values of f already evaluated at the current
    density. Uses the exact 1D form p_x = (C - F)/w with F the cumulative
    integral of f and C fixed by the far boundary condition; both endpoint
    values are exactly zero. Requires strictly positive density on the side.
    """
    _check_side(side)
    x = state.side_nodes(side)
    f = np.asarray(reaction, dtype=float)
    if f.shape != x.shape:
        raise ValueError(f"reaction needs shape {x.shape}, got {f.shape}")
    if not np.all(np.isfinite(f)):
        raise ValueError("reaction values must be finite")
    w = current_density(state, side)
    if np.any(w <= 0.0):
        raise DegenerateDensityError(
            f"density must be positive to solve for pressure; min={w.min():.3e}"
        )
    dx = np.diff(x)
    f_nodes_cum = np.concatenate(([0.0], np.cumsum(0.5 * (f[:-1] + f[1:]) * dx)))
    f_mid = 0.5 * (f_nodes_cum[:-1] + f_nodes_cum[1:])
    w_mid = 0.5 * (w[:-1] + w[1:])
    c = float(np.sum(f_mid / w_mid * dx) / np.sum(dx / w_mid))
    p = np.concatenate(([0.0], np.cumsum((c - f_mid) / w_mid * dx)))
    p[-1] = 0.0  # closes to zero by construction; pin the rounding residue
    return PressureSolution(side=side, values=p)


def _slopes(x: np.ndarray, g: np.ndarray) -> np.ndarray:
    s = np.empty(x.size)
    s[1:-1] = (g[2:] - g[:-2]) / (x[2:] - x[:-2])
    s[0] = (g[1] - g[0]) / (x[1] - x[0])
    s[-1] = (g[-1] - g[-2]) / (x[-1] - x[-2])
    return s


def _left_end_slope(x: np.ndarray, g: np.ndarray) -> float:
    # quadratic through the first three nodes, derivative at x[0]
    d0 = x[1] - x[0]
    d1 = x[2] - x[0]
    c0 = -(d0 + d1) / (d0 * d1)
    c1 = d1 / (d0 * (d1 - d0))
    c2 = -d0 / (d1 * (d1 - d0))
    return float(c0 * g[0] + c1 * g[1] + c2 * g[2])


def node_velocities(
    state: FrontState, side: Side, pressure: PressureSolution, a_side: float
) -> np.ndarray:
    """Modified Darcy velocity -a_side w_x + p_x at every node of one side."""
    _check_side(side)
    if pressure.side != side:
        raise ValueError(f"pressure was solved on side {pressure.side!r}, not {side!r}")
    x = state.side_nodes(side)
    w = current_density(state, side)
    return -a_side * _slopes(x, w) + _slopes(x, pressure.values)


def interface_velocity(
    state: FrontState,
    pressure_plus: PressureSolution,
    pressure_minus: PressureSolution,
    a_plus: float,
) -> float:
    """Interface speed from the plus-side one-sided evaluation of the Darcy law.

    Slopes come from the quadratic through the three plus-side nodes nearest
    the interface; a two-point difference would bias the speed by O(spacing)
    and the bias compounds along the trajectory.
    """
    if pressure_plus.side != "plus" or pressure_minus.side != "minus":
        raise ValueError("pass the plus-side and minus-side pressures in that order")
    x = state.nodes_plus
    w = current_density(state, "plus")
    p = pressure_plus.values
    return float(-a_plus * _left_end_slope(x, w) + _left_end_slope(x, p))


def front_step(
    state: FrontState,
    params: ModelParams,
    dt: float,
    pressure_sign: int = 1,
) -> FrontState:
    """One explicit Euler transport step of size dt.

    Species 1 reacts on the plus side against u2 = 0 and vice versa; reference
    densities absorb the reaction, node positions absorb the transport. Outer
    endpoints stay pinned, the two interface nodes move together with the
    plus-side law. Raises TangledMeshError if any node ordering inverts.
    """
    if not (np.isfinite(dt) and dt > 0):
        raise ValueError(f"dt must be finite and > 0, got {dt}")
    if pressure_sign not in (1, -1):
        raise ValueError(f"pressure_sign must be +1 or -1, got {pressure_sign}")
    a1, a2 = params.a

    j_m = _jacobian(state.nodes_minus, state.ref_spacing_minus)
    j_p = _jacobian(state.nodes_plus, state.ref_spacing_plus)
    w_m = state.ref_density_minus / j_m
    w_p = state.ref_density_plus / j_p
    f_m = lv_reaction(2, np.zeros_like(w_m), w_m, params.lv)
    f_p = lv_reaction(1, w_p, np.zeros_like(w_p), params.lv)

    p_m = solve_pressure(state, "minus", pressure_sign * f_m)
    p_p = solve_pressure(state, "plus", pressure_sign * f_p)
    v_m = node_velocities(state, "minus", p_m, a2)
    v_p = node_velocities(state, "plus", p_p, a1)
    v_if = interface_velocity(state, p_p, p_m, a1)

    eta_new = state.eta + dt * v_if
    new_minus = state.nodes_minus + dt * v_m
    new_minus[0] = state.nodes_minus[0]
    new_minus[-1] = eta_new
    new_plus = state.nodes_plus + dt * v_p
    new_plus[-1] = state.nodes_plus[-1]
    new_plus[0] = eta_new
    if np.any(np.diff(new_minus) <= 0) or np.any(np.diff(new_plus) <= 0):
        raise TangledMeshError(
            f"nodes crossed during step of dt={dt} at t={state.t}; reduce dt"
        )
    return FrontState(
        t=state.t + dt,
        eta=eta_new,
        nodes_minus=new_minus,
        nodes_plus=new_plus,
        ref_density_minus=state.ref_density_minus + dt * f_m * j_m,
        ref_density_plus=state.ref_density_plus + dt * f_p * j_p,
        ref_spacing_minus=state.ref_spacing_minus,
        ref_spacing_plus=state.ref_spacing_plus,
    )


def barenblatt_split_front(
    traj: InterfaceTrajectory, n_per_side: int = 150, margin: float = 0.5
) -> FrontState:
    """Initial tracker state sampling the split profile at t = 0.

    Outer endpoints sit `margin` inside the support edge so the density stays
    positive on both chains (the pressure solve needs that). The default node
    count keeps the explicit transport step stable at dt = 1e-4: node motion
    obeys a diffusive step bound dt <= 2*gap^2/(a*w), so finer chains need
    proportionally smaller steps.
    """
    if n_per_side < 3:
        raise ValueError(f"need at least 3 nodes per side, got {n_per_side}")
    profile = BarenblattProfile(traj.t_star)
    r0 = support_radius(0.0, profile)
    if not (np.isfinite(margin) and 0 < margin < r0 - abs(traj.x0)):
        raise ValueError(
            f"margin must lie in (0, {r0 - abs(traj.x0)}) to keep the outer "
            f"endpoints strictly between the interface and the support edge"
        )
    b_minus = -(r0 - margin)
    b_plus = r0 - margin
    nodes_minus = np.linspace(b_minus, traj.x0, n_per_side + 1)
    nodes_plus = np.linspace(traj.x0, b_plus, n_per_side + 1)
    return FrontState(
        t=0.0,
        eta=traj.x0,
        nodes_minus=nodes_minus,
        nodes_plus=nodes_plus,
        ref_density_minus=barenblatt(nodes_minus, 0.0, profile),
        ref_density_plus=barenblatt(nodes_plus, 0.0, profile),
        ref_spacing_minus=(traj.x0 - b_minus) / n_per_side,
        ref_spacing_plus=(b_plus - traj.x0) / n_per_side,
    )


def resample_front(state: FrontState, mesh: Mesh1D) -> tuple[FeField, FeField]:
    """Interpolate the two sides onto a uniform mesh (zero outside each side)."""
    x = mesh.nodes
    w_m = current_density(state, "minus")
    w_p = current_density(state, "plus")
    u2 = np.where(
        x <= state.eta, np.interp(x, state.nodes_minus, w_m, left=0.0, right=0.0), 0.0
    )
    u1 = np.where(
        x >= state.eta, np.interp(x, state.nodes_plus, w_p, left=0.0, right=0.0), 0.0
    )
    return FeField(mesh, u1), FeField(mesh, u2)


def run_front(
    initial: FrontState,
    params: ModelParams,
    dt: float,
    t_final: float,
    pressure_sign: int = 1,
) -> tuple[np.ndarray, np.ndarray, FrontState]:
    """Track until t_final; returns (times, interface positions, final state)."""
    if not (np.isfinite(t_final) and t_final >= 0):
        raise ValueError(f"t_final must be finite and >= 0, got {t_final}")
    n_steps = int(np.ceil(t_final / dt - 1e-9)) if t_final > 0 else 0
    times = [initial.t]
    etas = [initial.eta]
    state = initial
    for _ in range(n_steps):
        state = front_step(state, params, dt, pressure_sign=pressure_sign)
        times.append(state.t)
        etas.append(state.eta)
    return np.asarray(times), np.asarray(etas), state
