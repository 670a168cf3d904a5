"""Uniform 1D meshes, P1 nodal fields, and lumped-mass FE primitives.

Everything downstream (the Eulerian scheme, diagnostics, file output) works on
a uniform mesh of n elements over (x_left, x_right) with piecewise-linear
nodal fields. The inner product is the lumped (trapezoid) one: end nodes carry
weight h/2, interior nodes h. Stiffness matrices are assembled per element
from constant element weights, so rows and columns sum to zero exactly, which
is what makes discrete mass conservation exact for the reaction-free scheme.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import MeshMismatchError


@dataclass(frozen=True)
class Mesh1D:
    """Uniform mesh: n_elements intervals of width h covering [x_left, x_right].

    Node i sits at exactly x_left + i*h; the last node may differ from x_right
    by rounding, which every consumer must tolerate.
    """

    x_left: float
    x_right: float
    n_elements: int

    def __post_init__(self):
        if not (np.isfinite(self.x_left) and np.isfinite(self.x_right)):
            raise ValueError("mesh endpoints must be finite")
        if not self.x_left < self.x_right:
            raise ValueError(
                f"invalid range: x_left={self.x_left} must be < x_right={self.x_right}"
            )
        if self.n_elements < 2:
            raise ValueError(f"need at least 2 elements, got {self.n_elements}")

    @property
    def h(self) -> float:
        return (self.x_right - self.x_left) / self.n_elements

    @property
    def n_nodes(self) -> int:
        return self.n_elements + 1

    @cached_property
    def nodes(self) -> np.ndarray:
        x = self.x_left + np.arange(self.n_nodes) * self.h
        x.flags.writeable = False
        return x

    @cached_property
    def lumped_weights(self) -> np.ndarray:
        w = np.full(self.n_nodes, self.h)
        w[0] = 0.5 * self.h
        w[-1] = 0.5 * self.h
        w.flags.writeable = False
        return w


@dataclass(frozen=True, eq=False)
class FeField:
    """P1 nodal field on a mesh. Values are copied and frozen on construction."""

    mesh: Mesh1D
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)  # copy, so callers cannot mutate us
        if v.shape != (self.mesh.n_nodes,):
            raise ValueError(
                f"field needs {self.mesh.n_nodes} nodal values, got shape {v.shape}"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class SymTridiagonal:
    """Symmetric tridiagonal matrix stored as diagonal and off-diagonal bands."""

    diag: np.ndarray
    off: np.ndarray

    def to_dense(self) -> np.ndarray:
        m = np.diag(self.diag)
        m += np.diag(self.off, 1)
        m += np.diag(self.off, -1)
        return m

    def matvec(self, x: np.ndarray) -> np.ndarray:
        y = self.diag * x
        y[:-1] += self.off * x[1:]
        y[1:] += self.off * x[:-1]
        return y


def build_uniform_mesh(x_left: float, x_right: float, n_elements: int) -> Mesh1D:
    """Construct the uniform mesh; raises ValueError on an empty range or n < 2."""
    return Mesh1D(x_left, x_right, n_elements)


def _require_same_mesh(f: FeField, g: FeField) -> None:
    if f.mesh != g.mesh:
        raise MeshMismatchError(
            f"fields live on different meshes: {f.mesh} vs {g.mesh}"
        )


def lumped_inner_product(f: FeField, g: FeField) -> float:
    """Trapezoid nodal quadrature of f*g: sum_i w_i f_i g_i with w = h (h/2 at ends)."""
    _require_same_mesh(f, g)
    fg = f.values * g.values
    h = f.mesh.h
    return float(h * (fg.sum() - 0.5 * (fg[0] + fg[-1])))


def element_gradient(f: FeField) -> np.ndarray:
    """Per-element constant slope of a P1 field: (f_{i+1} - f_i)/h, length n_elements."""
    return np.diff(f.values) / f.mesh.h


def assemble_weighted_stiffness(weights: np.ndarray, mesh: Mesh1D) -> SymTridiagonal:
    """Stiffness matrix K_rs = sum_e w_e int phi_r' phi_s' for element weights w_e.

    Each element contributes (w_e/h) * [[1,-1],[-1,1]] to its two nodes, so every
    row and column sums to zero whatever the weights are.
    """
    w = np.asarray(weights, dtype=float)
    if w.shape != (mesh.n_elements,):
        raise ValueError(
            f"need one weight per element ({mesh.n_elements}), got shape {w.shape}"
        )
    if not np.all(np.isfinite(w)):
        raise ValueError("element weights must be finite")
    h = mesh.h
    diag = np.empty(mesh.n_nodes)
    diag[0] = w[0] / h
    diag[-1] = w[-1] / h
    diag[1:-1] = (w[:-1] + w[1:]) / h
    return SymTridiagonal(diag=diag, off=-w / h)
