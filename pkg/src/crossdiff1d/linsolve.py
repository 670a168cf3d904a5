"""Direct solver for block-tridiagonal systems with 2x2 blocks.

One block row per mesh node (the two species interleave inside each block).
Forward block elimination followed by back substitution, with an explicit
singularity guard on every 2x2 pivot. The kernel is compiled with numba
because it runs once per inner iteration of every time step.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import SingularPivotBlockError

# |det| below DET_RTOL * (max entry)^2 counts as singular; det scales like entry^2.
DET_RTOL = 1e-14


@dataclass(frozen=True, eq=False)
class BlockTridiagonal:
    """Block rows 0..n-1: sub[i-1] x_{i-1} + diag[i] x_i + sup[i] x_{i+1} = rhs_i."""

    sub: np.ndarray   # (n-1, 2, 2)
    diag: np.ndarray  # (n, 2, 2)
    sup: np.ndarray   # (n-1, 2, 2)

    def __post_init__(self):
        diag = np.ascontiguousarray(self.diag, dtype=np.float64)
        sub = np.ascontiguousarray(self.sub, dtype=np.float64)
        sup = np.ascontiguousarray(self.sup, dtype=np.float64)
        n = diag.shape[0]
        if n < 1 or diag.shape != (n, 2, 2):
            raise ValueError(f"diag must have shape (n, 2, 2), got {self.diag.shape}")
        if sub.shape != (n - 1, 2, 2) or sup.shape != (n - 1, 2, 2):
            raise ValueError(
                f"off-diagonal bands must have shape ({n - 1}, 2, 2), "
                f"got {self.sub.shape} and {self.sup.shape}"
            )
        for name, arr in (("sub", sub), ("diag", diag), ("sup", sup)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains non-finite entries")
        object.__setattr__(self, "sub", sub)
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "sup", sup)

    @property
    def n_block_rows(self) -> int:
        return self.diag.shape[0]

    def to_dense(self) -> np.ndarray:
        n = self.n_block_rows
        m = np.zeros((2 * n, 2 * n))
        for i in range(n):
            m[2 * i : 2 * i + 2, 2 * i : 2 * i + 2] = self.diag[i]
            if i + 1 < n:
                m[2 * i : 2 * i + 2, 2 * i + 2 : 2 * i + 4] = self.sup[i]
                m[2 * i + 2 : 2 * i + 4, 2 * i : 2 * i + 2] = self.sub[i]
        return m

    def matvec(self, x: np.ndarray) -> np.ndarray:
        y = np.einsum("ijk,ik->ij", self.diag, x)
        y[:-1] += np.einsum("ijk,ik->ij", self.sup, x[1:])
        y[1:] += np.einsum("ijk,ik->ij", self.sub, x[:-1])
        return y


@njit(cache=True)
def _block_thomas(sub, diag, sup, rhs, x, cp, dp):  # pragma: no cover - compiled
    n = diag.shape[0]
    # row 0 pivot is diag[0]
    p11 = diag[0, 0, 0]
    p12 = diag[0, 0, 1]
    p21 = diag[0, 1, 0]
    p22 = diag[0, 1, 1]
    r1 = rhs[0, 0]
    r2 = rhs[0, 1]
    for i in range(n):
        s = max(abs(p11), abs(p12), abs(p21), abs(p22))
        det = p11 * p22 - p12 * p21
        if s == 0.0 or abs(det) < DET_RTOL * s * s:
            return i
        i11 = p22 / det
        i12 = -p12 / det
        i21 = -p21 / det
        i22 = p11 / det
        dp[i, 0] = i11 * r1 + i12 * r2
        dp[i, 1] = i21 * r1 + i22 * r2
        if i == n - 1:
            break
        c11 = sup[i, 0, 0]
        c12 = sup[i, 0, 1]
        c21 = sup[i, 1, 0]
        c22 = sup[i, 1, 1]
        cp[i, 0, 0] = i11 * c11 + i12 * c21
        cp[i, 0, 1] = i11 * c12 + i12 * c22
        cp[i, 1, 0] = i21 * c11 + i22 * c21
        cp[i, 1, 1] = i21 * c12 + i22 * c22
        a11 = sub[i, 0, 0]
        a12 = sub[i, 0, 1]
        a21 = sub[i, 1, 0]
        a22 = sub[i, 1, 1]
        # next pivot: diag[i+1] - sub[i] @ cp[i]
        p11 = diag[i + 1, 0, 0] - (a11 * cp[i, 0, 0] + a12 * cp[i, 1, 0])
        p12 = diag[i + 1, 0, 1] - (a11 * cp[i, 0, 1] + a12 * cp[i, 1, 1])
        p21 = diag[i + 1, 1, 0] - (a21 * cp[i, 0, 0] + a22 * cp[i, 1, 0])
        p22 = diag[i + 1, 1, 1] - (a21 * cp[i, 0, 1] + a22 * cp[i, 1, 1])
        # next rhs: rhs[i+1] - sub[i] @ dp[i]
        r1 = rhs[i + 1, 0] - (a11 * dp[i, 0] + a12 * dp[i, 1])
        r2 = rhs[i + 1, 1] - (a21 * dp[i, 0] + a22 * dp[i, 1])
    x[n - 1, 0] = dp[n - 1, 0]
    x[n - 1, 1] = dp[n - 1, 1]
    for i in range(n - 2, -1, -1):
        x[i, 0] = dp[i, 0] - (cp[i, 0, 0] * x[i + 1, 0] + cp[i, 0, 1] * x[i + 1, 1])
        x[i, 1] = dp[i, 1] - (cp[i, 1, 0] * x[i + 1, 0] + cp[i, 1, 1] * x[i + 1, 1])
    return -1


def solve_block_thomas(system: BlockTridiagonal, rhs: np.ndarray) -> np.ndarray:
    """Solve the block-tridiagonal system for rhs of shape (n, 2).

    Raises SingularPivotBlockError naming the block row whose elimination pivot
    has |det| < 1e-14 times the squared magnitude of its largest entry.
    """
    n = system.n_block_rows
    b = np.ascontiguousarray(rhs, dtype=np.float64)
    if b.shape != (n, 2):
        raise ValueError(f"rhs must have shape ({n}, 2), got {rhs.shape}")
    if not np.all(np.isfinite(b)):
        raise ValueError("rhs contains non-finite entries")
    x = np.empty((n, 2))
    cp = np.empty((max(n - 1, 1), 2, 2))
    dp = np.empty((n, 2))
    status = _block_thomas(system.sub, system.diag, system.sup, b, x, cp, dp)
    if status >= 0:
        raise SingularPivotBlockError(
            f"singular 2x2 pivot at block row {status} of {n}"
        )
    return x
