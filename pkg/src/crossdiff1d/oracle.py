"""Closed-form reference solutions built on the Barenblatt profile.

The self-similar profile

    B(x, t) = 2 (t + t*)^(-1/3) * max(0, 1 - x^2 (t + t*)^(-2/3) / 12)

solves u_t = (u u_x)_x with support radius R(t) = sqrt(12) (t + t*)^(1/3) and
total mass (8/3) sqrt(12) for every t. Splitting it at a free point eta(t)
moving with the profile's own velocity -B_x gives an exact segregated pair
for the two-species system with equal a_i and no reactions:

    u1 = H(x - eta(t)) B,   u2 = H(eta(t) - x) B,

where eta' = eta / (3 (t + t*)) integrates to eta(t) = x0 ((t + t*)/t*)^(1/3).
An RK4 integrator for general interface velocity laws cross-checks that
closed form (and handles laws with drift or linear diffusion, where no closed
form exists).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NanDetectedError
from .mesh_fem import FeField, Mesh1D

# Total integral of the profile, constant in time: (8/3) * sqrt(12).
BARENBLATT_MASS = (8.0 / 3.0) * np.sqrt(12.0)


@dataclass(frozen=True)
class BarenblattProfile:
    """Time-offset parameter t* > 0 selecting one member of the family."""

    t_star: float

    def __post_init__(self):
        if not (np.isfinite(self.t_star) and self.t_star > 0):
            raise ValueError(f"t_star must be finite and > 0, got {self.t_star}")


@dataclass(frozen=True)
class InterfaceTrajectory:
    """Initial split point x0 for a profile with offset t*.

    The split must start strictly inside the support:
    |x0| < sqrt(12) * t_star^(1/3).
    """

    x0: float
    t_star: float

    def __post_init__(self):
        if not (np.isfinite(self.t_star) and self.t_star > 0):
            raise ValueError(f"t_star must be finite and > 0, got {self.t_star}")
        r0 = np.sqrt(12.0) * self.t_star ** (1.0 / 3.0)
        if not (np.isfinite(self.x0) and abs(self.x0) < r0):
            raise ValueError(
                f"x0 must lie strictly inside the initial support (|x0| < {r0}), "
                f"got {self.x0}"
            )


def support_radius(t: float, p: BarenblattProfile) -> float:
    """Support endpoint R(t) = sqrt(12) (t + t*)^(1/3)."""
    return float(np.sqrt(12.0) * (t + p.t_star) ** (1.0 / 3.0))


def barenblatt(x, t: float, p: BarenblattProfile):
    """Profile value at x (scalar or array) and time t >= 0."""
    s = t + p.t_star
    xx = np.asarray(x, dtype=float)
    val = 2.0 * s ** (-1.0 / 3.0) * np.maximum(0.0, 1.0 - xx**2 * s ** (-2.0 / 3.0) / 12.0)
    return val if val.ndim else float(val)


def barenblatt_dx(x, t: float, p: BarenblattProfile):
    """Spatial derivative: -x / (3 (t + t*)) inside the support, 0 outside."""
    s = t + p.t_star
    xx = np.asarray(x, dtype=float)
    inside = np.abs(xx) < support_radius(t, p)
    val = np.where(inside, -xx / (3.0 * s), 0.0)
    return val if val.ndim else float(val)


def eta_closed_form(t: float, traj: InterfaceTrajectory) -> float:
    """Split-point position eta(t) = x0 ((t + t*)/t*)^(1/3)."""
    return float(traj.x0 * ((t + traj.t_star) / traj.t_star) ** (1.0 / 3.0))


def integrate_interface_ode(
    velocity_gradient: Callable[[float, float], float],
    x0: float,
    t_final: float,
    dt: float,
) -> tuple[np.ndarray, np.ndarray]:
    """RK4 for eta'(t) = -G(eta, t) from eta(0) = x0; returns (times, positions).

    G is the gradient-like law the interface descends (for a pure profile,
    G = barenblatt_dx). The last step is shortened to land exactly on t_final.
    """
    if not (np.isfinite(t_final) and t_final >= 0):
        raise ValueError(f"t_final must be finite and >= 0, got {t_final}")
    if not (np.isfinite(dt) and dt > 0):
        raise ValueError(f"dt must be finite and > 0, got {dt}")
    times = [0.0]
    values = [float(x0)]
    t, x = 0.0, float(x0)
    while t < t_final - 1e-12 * max(1.0, t_final):
        step = min(dt, t_final - t)
        k1 = -velocity_gradient(x, t)
        k2 = -velocity_gradient(x + 0.5 * step * k1, t + 0.5 * step)
        k3 = -velocity_gradient(x + 0.5 * step * k2, t + 0.5 * step)
        k4 = -velocity_gradient(x + step * k3, t + step)
        x = x + step * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        t = t + step
        if not np.isfinite(x):
            raise NanDetectedError(f"interface position became non-finite at t={t}")
        times.append(t)
        values.append(x)
    return np.asarray(times), np.asarray(values)


def mollified_heaviside(x, epsilon: float):
    """Decreasing ramp: 1 for x <= -epsilon, (1 - x/epsilon)/2 inside, 0 for x >= epsilon."""
    if not (np.isfinite(epsilon) and epsilon > 0):
        raise ValueError(f"epsilon must be finite and > 0, got {epsilon}")
    xx = np.asarray(x, dtype=float)
    val = np.clip(0.5 * (1.0 - xx / epsilon), 0.0, 1.0)
    return val if val.ndim else float(val)


def explicit_segregated(x, t: float, traj: InterfaceTrajectory, p: BarenblattProfile):
    """Exact segregated pair (u1, u2) = (H(x - eta) B, H(eta - x) B).

    H is the sharp increasing step with H(0) = 1/2, so each species takes half
    the profile value exactly at the split point. Requires matching offsets.
    """
    if traj.t_star != p.t_star:
        raise ValueError(
            f"trajectory and profile offsets differ: {traj.t_star} vs {p.t_star}"
        )
    eta = eta_closed_form(t, traj)
    b = barenblatt(x, t, p)
    xx = np.asarray(x, dtype=float)
    step = np.where(xx > eta, 1.0, np.where(xx < eta, 0.0, 0.5))
    u1 = step * b
    u2 = (1.0 - step) * b
    if np.ndim(x):
        return u1, u2
    return float(u1), float(u2)


def explicit_segregated_fields(
    mesh: Mesh1D, t: float, traj: InterfaceTrajectory, p: BarenblattProfile
) -> tuple[FeField, FeField]:
    """Sample the exact segregated pair at the mesh nodes."""
    u1, u2 = explicit_segregated(mesh.nodes, t, traj, p)
    return FeField(mesh, u1), FeField(mesh, u2)
