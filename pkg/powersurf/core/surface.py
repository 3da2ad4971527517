"""Power sums, constraint geometry and regime classification for A3^C.

A3^C is the set {p1 = 0, p2 = 1, p3 = C} in R^5 where p_k is the k-th power
sum of the coordinates.
"""

import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from enum import Enum
from typing import List, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import null_space

from .errors import OffSurfaceError, RankDeficientError, SingularPointError

Point5 = NDArray[np.float64]
Multipliers = Tuple[float, float, float]

# Regime boundaries, rounded once from 50-digit values.
with localcontext() as _ctx:
    _ctx.prec = 50
    C_SING = float(1 / Decimal(30).sqrt())
    C_EDGE = float(3 / Decimal(20).sqrt())

DEFAULT_TOL_SURFACE = 1e-10
DEFAULT_TOL_DISTINCT = 1e-8
BOUNDARY_TOL = 1e-12


class Regime(Enum):
    EMPTY = "empty"
    FIVE_POINTS = "five-points"
    SINGULAR_SURFACE = "singular-surface"
    SMOOTH_CONNECTED = "smooth-connected"
    SMOOTH_FIVE_SPHERES = "smooth-five-spheres"

    @property
    def is_smooth(self) -> bool:
        return self in (Regime.SMOOTH_CONNECTED, Regime.SMOOTH_FIVE_SPHERES)


@dataclass(frozen=True)
class SurfaceSpec:
    """Parameter C of the surface plus the numerical tolerances used on it."""
    c: float
    tol_surface: float = DEFAULT_TOL_SURFACE
    tol_distinct: float = DEFAULT_TOL_DISTINCT

    def __post_init__(self):
        if not math.isfinite(self.c):
            raise ValueError(f"c must be finite, got {self.c}")
        if self.tol_surface <= 0 or self.tol_distinct <= 0:
            raise ValueError("tol_surface and tol_distinct must be positive")


@dataclass(frozen=True, eq=False)
class TangentFrame:
    """Orthonormal basis (2 x 5) of the tangent plane at a smooth surface point."""
    basis: NDArray[np.float64] = field(repr=False)

    def rotated(self, angle: float) -> "TangentFrame":
        rot = np.array([[math.cos(angle), -math.sin(angle)],
                        [math.sin(angle), math.cos(angle)]])
        basis = rot @ self.basis
        basis.setflags(write=False)
        return TangentFrame(basis)


def as_point(coords: Sequence[float]) -> Point5:
    """Return coords as a read-only float array of shape (5,)."""
    p = np.array(coords, dtype=np.float64)
    if p.shape != (5,):
        raise ValueError(f"a point of R^5 needs 5 coordinates, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError(f"coordinates must be finite: {p}")
    p.setflags(write=False)
    return p


def power_sum(p: Point5, k: int) -> float:
    if not 1 <= k <= 4:
        raise ValueError(f"power sum degree must be in 1..4, got {k}")
    return float(np.sum(np.asarray(p, dtype=np.float64) ** k))


def constraint_residuals(p: Point5, c: float) -> NDArray[np.float64]:
    """(p1, p2 - 1, p3 - c) at p."""
    p = np.asarray(p, dtype=np.float64)
    return np.array([p.sum(), np.dot(p, p) - 1.0, np.sum(p ** 3) - c])


def on_surface(p: Point5, spec: SurfaceSpec) -> bool:
    return bool(np.max(np.abs(constraint_residuals(p, spec.c))) <= spec.tol_surface)


def classify_regime(spec: SurfaceSpec) -> Regime:
    c = abs(spec.c)
    if abs(c - C_EDGE) <= BOUNDARY_TOL:
        return Regime.FIVE_POINTS
    if c > C_EDGE:
        return Regime.EMPTY
    if abs(c - C_SING) <= BOUNDARY_TOL:
        return Regime.SINGULAR_SURFACE
    if c < C_SING:
        return Regime.SMOOTH_CONNECTED
    return Regime.SMOOTH_FIVE_SPHERES


def distinct_value_count(p: Point5, tol_distinct: float = DEFAULT_TOL_DISTINCT) -> int:
    """Number of clusters of the sorted coordinates split at gaps > tol_distinct."""
    if tol_distinct <= 0:
        raise ValueError("tol_distinct must be positive")
    values = np.sort(np.asarray(p, dtype=np.float64))
    return int(np.count_nonzero(np.diff(values) > tol_distinct)) + 1


def is_singular_surface_point(p: Point5, spec: SurfaceSpec) -> bool:
    if not on_surface(p, spec):
        raise OffSurfaceError(
            f"point {np.asarray(p)} is not on A3^C for c={spec.c} "
            f"(residuals {constraint_residuals(p, spec.c)})")
    return distinct_value_count(p, spec.tol_distinct) < 3


def constraint_jacobian(p: Point5) -> NDArray[np.float64]:
    """Rows are the gradients of p1, p2 and p3."""
    p = np.asarray(p, dtype=np.float64)
    return np.vstack([np.ones(5), 2.0 * p, 3.0 * p ** 2])


def tangent_frame(p: Point5, spec: SurfaceSpec) -> TangentFrame:
    """Orthonormal null-space basis of the constraint Jacobian.

    The orientation of the returned frame is arbitrary; only quantities that
    are invariant under a change of frame should be derived from it.
    """
    if distinct_value_count(p, spec.tol_distinct) < 3:
        raise SingularPointError(f"point {np.asarray(p)} takes fewer than three values")

    jac = constraint_jacobian(p)
    sv = np.linalg.svd(jac, compute_uv=False)
    if sv[-1] <= 1e-10 * sv[0]:
        raise RankDeficientError(f"constraint Jacobian singular values {sv}")

    basis = null_space(jac, rcond=1e-10).T
    if basis.shape != (2, 5):
        raise RankDeficientError(f"null space has dimension {basis.shape[0]}, expected 2")
    basis = np.ascontiguousarray(basis)
    basis.setflags(write=False)
    return TangentFrame(basis)


def lagrangian_hessian_diagonal(p: Point5, multipliers: Multipliers) -> NDArray[np.float64]:
    """Diagonal of the Hessian of p4 - l3 p3 - l2 p2 - l1 p1 (l1 drops out)."""
    _, lam2, lam3 = multipliers
    p = np.asarray(p, dtype=np.float64)
    return 12.0 * p ** 2 - 6.0 * lam3 * p - 2.0 * lam2


def projected_hessian(p: Point5, multipliers: Multipliers, frame: TangentFrame) -> NDArray[np.float64]:
    diag = lagrangian_hessian_diagonal(p, multipliers)
    b = frame.basis
    h = (b * diag) @ b.T
    return 0.5 * (h + h.T)


def projected_hessian_eigenvalues(p: Point5, multipliers: Multipliers, frame: TangentFrame) -> NDArray[np.float64]:
    return np.linalg.eigvalsh(projected_hessian(p, multipliers, frame))


def p3_critical_levels() -> List[Tuple[Tuple[int, ...], Tuple[float, ...], float, int]]:
    """Critical points of p3 on {p1 = 0, p2 = 1}, one entry per sign.

    Each entry is (pattern, values, p3 value, number of points). Coordinates
    taking two values give the only critical points; their p3 values are the
    regime boundaries.
    """
    levels = []
    for sign in (1.0, -1.0):
        x, v = sign / math.sqrt(20), -4.0 * sign / math.sqrt(20)
        levels.append(((4, 1), (x, v), 4 * x ** 3 + v ** 3, 5))
    for sign in (1.0, -1.0):
        x, v = 2.0 * sign / math.sqrt(30), -3.0 * sign / math.sqrt(30)
        levels.append(((3, 2), (x, v), 3 * x ** 3 + 2 * v ** 3, 10))
    return levels


def fit_multipliers(p: Point5) -> Multipliers:
    """Least-squares (l1, l2, l3) for grad p4 = J^T l at p.

    The fit is exact at a critical point. At a singular point the system is
    underdetermined and the minimum-norm solution is returned.
    """
    p = np.asarray(p, dtype=np.float64)
    lam, *_ = np.linalg.lstsq(constraint_jacobian(p).T, 4.0 * p ** 3, rcond=None)
    return float(lam[0]), float(lam[1]), float(lam[2])
