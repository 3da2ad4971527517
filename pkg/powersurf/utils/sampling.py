"""Sampling A3^C and projecting ambient points onto it."""

import logging
from typing import Optional

import numpy as np
from numpy.typing import NDArray

from ..core.errors import DegenerateRegimeError
from ..core.surface import (
    Point5,
    Regime,
    SurfaceSpec,
    as_point,
    classify_regime,
    constraint_jacobian,
    constraint_residuals,
)

logger = logging.getLogger(__name__)

P3_TOL = 1e-13
PROJECTION_TOL = 1e-13
DEFAULT_MAX_ITER = 200
DEFAULT_MAX_RETRIES = 20
DEFAULT_MAX_STEP = 0.1


def _normalize_rows(x: NDArray[np.float64]) -> NDArray[np.float64]:
    """Put every row on S^3 = {p1 = 0, p2 = 1}."""
    x = x - x.mean(axis=1, keepdims=True)
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def _p3_gradient_on_sphere(x: NDArray[np.float64]) -> NDArray[np.float64]:
    g = 3.0 * x ** 2
    g -= g.mean(axis=1, keepdims=True)
    g -= np.sum(g * x, axis=1, keepdims=True) * x
    return g


def _retract_p3(x: NDArray[np.float64], c: float, max_iter: int, max_step: float) -> NDArray[np.bool_]:
    """Move rows of x (already on S^3) along S^3 until p3 = c; returns the converged mask."""
    for _ in range(max_iter):
        r = c - np.sum(x ** 3, axis=1)
        active = np.abs(r) > P3_TOL
        if not active.any():
            break
        xa = x[active]
        g = _p3_gradient_on_sphere(xa)
        gn2 = np.maximum(np.sum(g * g, axis=1), 1e-300)
        step = (r[active] / gn2)[:, None] * g
        norms = np.linalg.norm(step, axis=1)
        scale = np.minimum(1.0, max_step / np.maximum(norms, 1e-300))
        x[active] = _normalize_rows(xa + step * scale[:, None])
    return np.abs(c - np.sum(x ** 3, axis=1)) <= P3_TOL


def sample_surface_points(
    spec: SurfaceSpec,
    n: int,
    rng=None,
    max_iter: int = DEFAULT_MAX_ITER,
    max_retries: int = DEFAULT_MAX_RETRIES,
    max_step: float = DEFAULT_MAX_STEP,
) -> NDArray[np.float64]:
    """Draw n points of A3^C as an (n, 5) array.

    Gaussian vectors are centred and normalised onto S^3, then pushed along
    the p3 gradient on S^3 by damped Newton steps until p3 = C. Rows that do
    not converge are redrawn up to ``max_retries`` times. ``rng`` is anything
    ``numpy.random.default_rng`` accepts.
    """
    regime = classify_regime(spec)
    if regime in (Regime.EMPTY, Regime.FIVE_POINTS):
        raise DegenerateRegimeError(f"cannot sample A3^C at c={spec.c}: regime {regime.value}")
    if n < 1:
        raise ValueError(f"need at least one sample, got {n}")

    rng = np.random.default_rng(rng)
    out = np.empty((n, 5))
    pending = np.arange(n)
    for attempt in range(max_retries + 1):
        x = _normalize_rows(rng.standard_normal((pending.size, 5)))
        ok = _retract_p3(x, spec.c, max_iter, max_step)
        out[pending[ok]] = x[ok]
        pending = pending[~ok]
        if pending.size == 0:
            return out
        logger.debug(f"c={spec.c}: {pending.size} samples did not reach p3=c (attempt {attempt + 1})")

    logger.warning(f"c={spec.c}: sampler retries exhausted with {pending.size} points pending")
    raise DegenerateRegimeError(f"could not sample A3^C at c={spec.c}; the surface is (nearly) degenerate")


def project_to_surface(q: Point5, c: float, max_iter: int = 50) -> Optional[Point5]:
    """Minimum-norm Gauss-Newton projection of q onto A3^C, or None if it fails.

    The least-squares step keeps working next to singular points where the
    constraint Jacobian loses rank.
    """
    x = np.array(q, dtype=np.float64)
    for _ in range(max_iter):
        res = constraint_residuals(x, c)
        if not np.all(np.isfinite(res)):
            return None
        if np.max(np.abs(res)) <= PROJECTION_TOL:
            return as_point(x)
        delta, *_ = np.linalg.lstsq(constraint_jacobian(x), res, rcond=None)
        x = x - delta
    return None
