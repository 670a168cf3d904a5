"""Model data: species parameters, Lotka-Volterra reactions, regularized fluxes.

The two-species flux for species i is

    J_i = a_i u_i d/dx(u1 + u2) + b_i q u_i + c_i d/dx u_i
          + (delta/2) d/dx(u_i (u1 + u2)),

where the delta-term is the parabolic regularization that keeps the diffusion
block spectrum bounded away from zero when the species segregate. Densities
entering coefficients are averaged per element and the averages clamped to
[0, 1/epsilon], so each element carries one constant 2x2 diffusion block and
one drift value per species.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mesh_fem import FeField, Mesh1D
from .errors import MeshMismatchError


@dataclass(frozen=True)
class LotkaVolterra:
    """Reaction coefficients: f_i = u_i (alpha_i - beta_i1 u1 - beta_i2 u2)."""

    alpha: tuple[float, float]
    beta: tuple[tuple[float, float], tuple[float, float]]

    def __post_init__(self):
        vals = [*self.alpha, *self.beta[0], *self.beta[1]]
        if not all(np.isfinite(v) for v in vals):
            raise ValueError("reaction coefficients must be finite")

    @classmethod
    def zero(cls) -> "LotkaVolterra":
        return cls(alpha=(0.0, 0.0), beta=((0.0, 0.0), (0.0, 0.0)))


@dataclass(frozen=True)
class ModelParams:
    """All continuous-model parameters for the two-species system.

    a, b, c are per-species (nonlinear diffusion, drift, linear diffusion);
    delta is the parabolic regularization weight, epsilon the cutoff level
    (densities are clamped to [0, 1/epsilon] inside coefficients). q_field,
    when present, is the environment drift profile multiplying b_i.
    """

    a: tuple[float, float]
    b: tuple[float, float] = (0.0, 0.0)
    c: tuple[float, float] = (0.0, 0.0)
    delta: float = 0.0
    epsilon: float = 1e-3
    lv: LotkaVolterra = LotkaVolterra.zero()
    q_field: FeField | None = None

    def __post_init__(self):
        for name in ("a", "c"):
            pair = getattr(self, name)
            if len(pair) != 2 or not all(np.isfinite(v) and v >= 0 for v in pair):
                raise ValueError(f"{name} must be two finite values >= 0, got {pair}")
        if len(self.b) != 2 or not all(np.isfinite(v) for v in self.b):
            raise ValueError(f"b must be two finite values, got {self.b}")
        if not (np.isfinite(self.delta) and self.delta >= 0):
            raise ValueError(f"delta must be finite and >= 0, got {self.delta}")
        if not (np.isfinite(self.epsilon) and self.epsilon > 0):
            raise ValueError(f"epsilon must be finite and > 0, got {self.epsilon}")


def lv_reaction(i: int, u1, u2, lv: LotkaVolterra):
    """Reaction f_i(u1, u2) = u_i (alpha_i - beta_i1 u1 - beta_i2 u2); broadcasts."""
    if i not in (1, 2):
        raise ValueError(f"species index must be 1 or 2, got {i}")
    ui = u1 if i == 1 else u2
    b1, b2 = lv.beta[i - 1]
    return ui * (lv.alpha[i - 1] - b1 * np.asarray(u1) - b2 * np.asarray(u2))


def cutoff(s, epsilon: float):
    """Clamp to [0, 1/epsilon]; applied to every density entering a coefficient."""
    if not (np.isfinite(epsilon) and epsilon > 0):
        raise ValueError(f"epsilon must be finite and > 0, got {epsilon}")
    return np.clip(s, 0.0, 1.0 / epsilon)


def _element_averages(nodal: np.ndarray) -> np.ndarray:
    return 0.5 * (nodal[:-1] + nodal[1:])


def _flux_coefficients_raw(
    v1: np.ndarray,
    v2: np.ndarray,
    params: ModelParams,
    q_elem: np.ndarray | None,
) -> tuple[np.ndarray, np.ndarray]:
    """Core of regularized_flux_coefficients on raw nodal arrays.

    Returns (blocks, drift): blocks[e] is the 2x2 diffusion matrix on element e,
    drift[e, i-1] the frozen drift flux value b_i q(e) ubar_i(e).
    """
    # clamp after averaging: an element whose mean is <= 0 carries no
    # cross coupling, which starves the checkerboard mode that alternating
    # +/- nodal values would otherwise feed through the frozen coefficients
    ub1 = cutoff(_element_averages(v1), params.epsilon)
    ub2 = cutoff(_element_averages(v2), params.epsilon)
    ub = ub1 + ub2
    a1, a2 = params.a
    c1, c2 = params.c
    half_delta = 0.5 * params.delta
    n = ub1.shape[0]
    blocks = np.empty((n, 2, 2))
    blocks[:, 0, 0] = a1 * ub1 + c1 + half_delta * (ub + ub1)
    blocks[:, 0, 1] = a1 * ub1 + half_delta * ub1
    blocks[:, 1, 0] = a2 * ub2 + half_delta * ub2
    blocks[:, 1, 1] = a2 * ub2 + c2 + half_delta * (ub + ub2)
    drift = np.zeros((n, 2))
    if q_elem is not None:
        b1, b2 = params.b
        drift[:, 0] = b1 * q_elem * ub1
        drift[:, 1] = b2 * q_elem * ub2
    return blocks, drift


def regularized_flux_coefficients(
    u1_frozen: FeField, u2_frozen: FeField, params: ModelParams
) -> tuple[np.ndarray, np.ndarray]:
    """Element-wise 2x2 diffusion blocks and per-species drift values.

    Block entries (clamped element averages of the nodal densities):
        D_ii = a_i ubar_i + c_i + (delta/2)(ubar + ubar_i)
        D_ij = a_i ubar_i + (delta/2) ubar_i   (j != i)
    Drift value: b_i q(e) ubar_i(e); zero when no q_field is set.
    """
    if u1_frozen.mesh != u2_frozen.mesh:
        raise MeshMismatchError("species fields live on different meshes")
    q_elem = None
    if params.q_field is not None:
        if params.q_field.mesh != u1_frozen.mesh:
            raise MeshMismatchError("q_field mesh differs from the species mesh")
        q_elem = _element_averages(params.q_field.values)
    return _flux_coefficients_raw(
        u1_frozen.values, u2_frozen.values, params, q_elem
    )


def gaussian_bump_initial(mesh: Mesh1D, center: float, width: float) -> FeField:
    """Nodal samples of exp(-(x - center)^2 / width); width is the denominator."""
    if not (np.isfinite(width) and width > 0):
        raise ValueError(f"width must be finite and > 0, got {width}")
    if not np.isfinite(center):
        raise ValueError("center must be finite")
    x = mesh.nodes
    return FeField(mesh, np.exp(-((x - center) ** 2) / width))
