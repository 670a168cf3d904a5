"""Scalar diagnostics evaluated on a pair of species fields.

All quantities use the same lumped quadrature as the scheme, so the reported
masses are exactly the quantities the reaction-free stepping conserves. The
contact point is where u1 - u2 changes sign; the gradient jump measures the
kink of u1 + u2 there by comparing one-sided least-squares slopes fitted away
from the regularization layer.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MeshMismatchError, StencilError
from .mesh_fem import FeField, lumped_inner_product


@dataclass(frozen=True, eq=False)
class Snapshot:
    """One recorded instant: fields plus the derived scalar diagnostics."""

    t: float
    u1: FeField
    u2: FeField
    mass1: float
    mass2: float
    segregation_defect: float
    contact_point: float | None
    gradient_jump: float | None


def mass(u: FeField) -> float:
    """Lumped integral of the field over the domain."""
    ones = FeField(u.mesh, np.ones(u.mesh.n_nodes))
    return lumped_inner_product(u, ones)


def segregation_defect(u1: FeField, u2: FeField) -> float:
    """Lumped integral of the product u1*u2; zero iff nodal supports are disjoint."""
    if u1.mesh != u2.mesh:
        raise MeshMismatchError("species fields live on different meshes")
    prod = u1.values * u2.values
    h = u1.mesh.h
    return float(h * (prod.sum() - 0.5 * (prod[0] + prod[-1])))


def contact_point(u1: FeField, u2: FeField) -> float | None:
    """Unique sign change of u1 - u2, located by linear interpolation.

    A run of exact zeros strictly between opposite signs counts as one change,
    located at the run's midpoint. Returns None when there is no change or
    more than one.
    """
    if u1.mesh != u2.mesh:
        raise MeshMismatchError("species fields live on different meshes")
    d = u1.values - u2.values
    x = u1.mesh.nodes
    nz = np.flatnonzero(d)
    if nz.size < 2:
        return None
    crossings: list[float] = []
    for a, b in zip(nz[:-1], nz[1:]):
        if d[a] * d[b] >= 0.0:
            continue
        if b == a + 1:
            crossings.append(float(x[a] + (x[b] - x[a]) * d[a] / (d[a] - d[b])))
        else:
            crossings.append(float(0.5 * (x[a + 1] + x[b - 1])))
        if len(crossings) > 1:
            return None
    return crossings[0] if crossings else None


def _ls_slope(x: np.ndarray, y: np.ndarray) -> float:
    xm = x - x.mean()
    return float(np.dot(xm, y - y.mean()) / np.dot(xm, xm))


def gradient_jump(
    u_sum: FeField, x_c: float, stencil_width: int = 10, skip: int = 2
) -> float:
    """One-sided slope difference of u_sum across x_c.

    Each side's slope is a least-squares line fit over stencil_width elements,
    skipping `skip` elements adjacent to the one containing x_c (those carry
    the smoothing layer, not the kink). Affine fields give exactly 0; adding
    any single affine function leaves the value unchanged.
    """
    mesh = u_sum.mesh
    if not mesh.x_left < x_c < mesh.x_right:
        raise ValueError(f"x_c={x_c} lies outside the mesh ({mesh.x_left}, {mesh.x_right})")
    if stencil_width < 1 or skip < 0:
        raise ValueError("need stencil_width >= 1 and skip >= 0")
    e_c = min(int((x_c - mesh.x_left) / mesh.h), mesh.n_elements - 1)
    lo_right = e_c + 1 + skip
    hi_right = lo_right + stencil_width - 1
    hi_left = e_c - 1 - skip
    lo_left = hi_left - stencil_width + 1
    if lo_left < 0 or hi_right > mesh.n_elements - 1:
        raise StencilError(
            f"stencil (width {stencil_width}, skip {skip}) around element {e_c} "
            f"does not fit in {mesh.n_elements} elements"
        )
    x = mesh.nodes
    v = u_sum.values
    right = _ls_slope(x[lo_right : hi_right + 2], v[lo_right : hi_right + 2])
    left = _ls_slope(x[lo_left : hi_left + 2], v[lo_left : hi_left + 2])
    return right - left


def make_snapshot(
    t: float,
    u1: FeField,
    u2: FeField,
    stencil_width: int = 10,
    skip: int = 2,
) -> Snapshot:
    """Bundle fields with their diagnostics; jump is None without a usable contact."""
    xc = contact_point(u1, u2)
    jump = None
    if xc is not None:
        u_sum = FeField(u1.mesh, u1.values + u2.values)
        try:
            jump = gradient_jump(u_sum, xc, stencil_width=stencil_width, skip=skip)
        except StencilError:
            jump = None
    return Snapshot(
        t=t,
        u1=u1,
        u2=u2,
        mass1=mass(u1),
        mass2=mass(u2),
        segregation_defect=segregation_defect(u1, u2),
        contact_point=xc,
        gradient_jump=jump,
    )
