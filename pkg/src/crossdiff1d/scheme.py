"""Semi-implicit time stepping for the regularized two-species system.

One step advances both species at once through a fixed-point loop: diffusion
blocks and drift are frozen at the previous inner iterate, the growth part
alpha_i u_i stays implicit, and the competition loss is evaluated with the
clamped previous-iterate density against clamped previous-step densities,

    (1/tau)(u^{n,k} - u^{n-1}, chi)_h + (D(u^{n,k-1}) du^{n,k} + g, dchi)
        = (alpha u^{n,k} - loss(u^{n,k-1}, u^{n-1}), chi)_h,

iterated until the sup-norm change of both species drops below tol. With zero
reactions the stiffness rows annihilate constants and the lumped masses of
both species are conserved exactly, step by step.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diagnostics import Snapshot, make_snapshot
from .errors import NanDetectedError, NoConvergenceError, NumericalError
from .linsolve import BlockTridiagonal, solve_block_thomas
from .mesh_fem import FeField
from .model import ModelParams, _element_averages, _flux_coefficients_raw, cutoff


@dataclass(frozen=True)
class TimeStepping:
    """Step size, horizon, and inner-loop controls.

    tol = 0 is allowed and makes the inner loop run to k_max and fail, which is
    useful for probing the non-convergence path; configs for real runs require
    tol > 0.
    """

    tau: float
    t_final: float
    tol: float
    k_max: int

    def __post_init__(self):
        if not (np.isfinite(self.tau) and self.tau > 0):
            raise ValueError(f"tau must be finite and > 0, got {self.tau}")
        if not (np.isfinite(self.t_final) and self.t_final >= 0):
            raise ValueError(f"t_final must be finite and >= 0, got {self.t_final}")
        if not (np.isfinite(self.tol) and self.tol >= 0):
            raise ValueError(f"tol must be finite and >= 0, got {self.tol}")
        if self.k_max < 1:
            raise ValueError(f"k_max must be >= 1, got {self.k_max}")


@dataclass(frozen=True, eq=False)
class State:
    """Both species at one time level, sharing a mesh."""

    t: float
    u1: FeField
    u2: FeField

    def __post_init__(self):
        if self.u1.mesh != self.u2.mesh:
            raise ValueError("species fields live on different meshes")
        if not np.isfinite(self.t):
            raise ValueError(f"time must be finite, got {self.t}")


def _assemble_raw(
    v1_prev: np.ndarray,
    v2_prev: np.ndarray,
    v1_frozen: np.ndarray,
    v2_frozen: np.ndarray,
    params: ModelParams,
    q_elem: np.ndarray | None,
    tau: float,
    h: float,
    w: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Build (off_blocks, diag_blocks, rhs) for one inner iteration.

    The off-diagonal band is shared between sub and sup positions (the element
    coupling is spatially symmetric); callers must treat it as read-only.
    """
    blocks, drift = _flux_coefficients_raw(v1_frozen, v2_frozen, params, q_elem)
    k_el = blocks / h
    n_nodes = v1_prev.shape[0]
    diag = np.zeros((n_nodes, 2, 2))
    diag[:-1] += k_el
    diag[1:] += k_el
    a1, a2 = params.lv.alpha
    diag[:, 0, 0] += w * (1.0 / tau - a1)
    diag[:, 1, 1] += w * (1.0 / tau - a2)

    lam1p = cutoff(v1_prev, params.epsilon)
    lam2p = cutoff(v2_prev, params.epsilon)
    (b11, b12), (b21, b22) = params.lv.beta
    loss1 = cutoff(v1_frozen, params.epsilon) * (b11 * lam1p + b12 * lam2p)
    loss2 = cutoff(v2_frozen, params.epsilon) * (b21 * lam1p + b22 * lam2p)

    rhs = np.empty((n_nodes, 2))
    rhs[:, 0] = w * (v1_prev / tau - loss1)
    rhs[:, 1] = w * (v2_prev / tau - loss2)
    # drift term (g, dchi): interior nodes see g(e_left) - g(e_right)
    rhs[1:-1] -= drift[:-1] - drift[1:]
    rhs[0] += drift[0]
    rhs[-1] -= drift[-1]
    return -k_el, diag, rhs


def assemble_step_system(
    prev: State,
    frozen: tuple[FeField, FeField],
    params: ModelParams,
    tau: float,
) -> tuple[BlockTridiagonal, np.ndarray]:
    """System and right-hand side for one inner iteration from state `prev`.

    `frozen` holds the previous inner iterate whose clamped values feed the
    diffusion blocks, the drift, and the competition loss.
    """
    if not (np.isfinite(tau) and tau > 0):
        raise ValueError(f"tau must be finite and > 0, got {tau}")
    f1, f2 = frozen
    mesh = prev.u1.mesh
    if f1.mesh != mesh or f2.mesh != mesh:
        raise ValueError("frozen iterate lives on a different mesh than the state")
    q_elem = None
    if params.q_field is not None:
        if params.q_field.mesh != mesh:
            raise ValueError("q_field mesh differs from the state mesh")
        q_elem = _element_averages(params.q_field.values)
    off, diag, rhs = _assemble_raw(
        prev.u1.values,
        prev.u2.values,
        f1.values,
        f2.values,
        params,
        q_elem,
        tau,
        mesh.h,
        mesh.lumped_weights,
    )
    return BlockTridiagonal(sub=off, diag=diag, sup=off), rhs


def inner_fixed_point(
    prev: State, params: ModelParams, ts: TimeStepping
) -> tuple[State, int]:
    """Advance one step of tau; returns the new state and the iteration count.

    Starts the loop from the previous step's values and stops as soon as the
    max sup-norm change of either species drops below ts.tol (strictly).
    Raises NoConvergenceError after k_max iterations, NanDetectedError if an
    iterate degenerates.
    """
    mesh = prev.u1.mesh
    q_elem = None
    if params.q_field is not None:
        if params.q_field.mesh != mesh:
            raise ValueError("q_field mesh differs from the state mesh")
        q_elem = _element_averages(params.q_field.values)
    h = mesh.h
    w = mesh.lumped_weights
    v1_prev = prev.u1.values
    v2_prev = prev.u2.values
    v1 = v1_prev
    v2 = v2_prev
    residual = np.inf
    for k in range(1, ts.k_max + 1):
        off, diag, rhs = _assemble_raw(
            v1_prev, v2_prev, v1, v2, params, q_elem, ts.tau, h, w
        )
        x = solve_block_thomas(BlockTridiagonal(sub=off, diag=diag, sup=off), rhs)
        if not np.all(np.isfinite(x)):
            raise NanDetectedError(
                f"non-finite iterate in inner loop at k={k}, t={prev.t}"
            )
        residual = max(
            float(np.max(np.abs(x[:, 0] - v1))),
            float(np.max(np.abs(x[:, 1] - v2))),
        )
        v1 = x[:, 0]
        v2 = x[:, 1]
        if residual < ts.tol:
            new = State(prev.t + ts.tau, FeField(mesh, v1), FeField(mesh, v2))
            return new, k
    raise NoConvergenceError(
        f"inner loop did not converge in {ts.k_max} iterations "
        f"(last residual {residual:.3e}, tol {ts.tol:.3e})",
        residual=residual,
    )


def step_states(initial: State, params: ModelParams, ts: TimeStepping):
    """Yield (state, inner_iterations) for each step until t_final is reached.

    Numerical failures are re-raised with the step index and time attached.
    """
    n_steps = int(np.ceil(ts.t_final / ts.tau - 1e-9)) if ts.t_final > 0 else 0
    state = initial
    for n in range(1, n_steps + 1):
        try:
            state, k = inner_fixed_point(state, params, ts)
        except NumericalError as exc:
            raise type(exc)(f"step {n} (t={initial.t + n * ts.tau:g}): {exc}") from exc
        yield state, k


def run(
    initial: State,
    params: ModelParams,
    ts: TimeStepping,
    snapshot_times: list[float] | tuple[float, ...],
    stencil_width: int = 10,
    skip: int = 2,
) -> list[Snapshot]:
    """Step from `initial` to t_final, recording snapshots.

    The initial state is always the first snapshot. Every requested time in
    [0, t_final] is served by the first step whose time reaches it.
    """
    for t_s in snapshot_times:
        if not (0.0 <= t_s <= ts.t_final + 1e-12 * max(1.0, ts.t_final)):
            raise ValueError(
                f"snapshot time {t_s} outside [0, {ts.t_final}]"
            )
    pending = sorted(t_s for t_s in snapshot_times if t_s > 0.0)
    snaps = [
        make_snapshot(initial.t, initial.u1, initial.u2, stencil_width, skip)
    ]
    for state, _k in step_states(initial, params, ts):
        t_rel = state.t - initial.t
        while pending and pending[0] <= t_rel + 1e-9 * max(1.0, t_rel):
            pending.pop(0)
            snaps.append(
                make_snapshot(state.t, state.u1, state.u2, stencil_width, skip)
            )
    return snaps
