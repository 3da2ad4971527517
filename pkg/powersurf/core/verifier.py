"""Numerical cross-check of the closed-form critical orbits.

Newton's method is run on the full 8 x 8 KKT system from random surface
points and every converged state is matched against the enumerated
orbits. ``local_extremum_probe`` settles the type of a critical point by
sampling p4 around it, which also works at singular points where no
tangent plane exists.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Union

import numpy as np
from numpy.typing import NDArray

from ..utils.sampling import project_to_surface, sample_surface_points
from .enumerator import analyze
from .errors import DegenerateRegimeError, OffSurfaceError, SingularPointError
from .surface import (
    Multipliers,
    Point5,
    Regime,
    SurfaceSpec,
    as_point,
    classify_regime,
    constraint_residuals,
    distinct_value_count,
    fit_multipliers,
    on_surface,
    power_sum,
    tangent_frame,
)

logger = logging.getLogger(__name__)

DEFAULT_MAX_ITER = 50
DEFAULT_TOL = 1e-11
DEFAULT_MAX_HALVINGS = 20
DEFAULT_MATCH_TOL = 1e-7
DEFAULT_PROBE_RADIUS = 1e-3
DEFAULT_N_PROBE = 200


@dataclass(frozen=True, eq=False)
class KktState:
    point: Point5
    multipliers: Multipliers

    def as_vector(self) -> NDArray[np.float64]:
        return np.concatenate([np.asarray(self.point, dtype=np.float64), self.multipliers])

    @classmethod
    def from_vector(cls, z: NDArray[np.float64]) -> "KktState":
        return cls(as_point(z[:5]), (float(z[5]), float(z[6]), float(z[7])))


@dataclass(frozen=True)
class Diverged:
    """Outcome of a Newton run that did not reach the tolerance."""
    reason: str
    iterations: int
    residual: float


@dataclass
class VerificationReport:
    n_starts: int
    n_converged: int
    n_diverged: int
    matched_orbits: Dict[str, int]
    unmatched: List[KktState]
    max_residual: float
    seed: Optional[int]
    tol: float = DEFAULT_TOL

    @property
    def all_orbits_hit(self) -> bool:
        return all(hits > 0 for hits in self.matched_orbits.values())

    @property
    def passed(self) -> bool:
        return not self.unmatched and self.max_residual < self.tol


class ProbeVerdict(Enum):
    LOCAL_MIN = "LocalMin"
    LOCAL_MAX = "LocalMax"
    NEITHER = "Neither"


@dataclass(frozen=True)
class ProbeResult:
    verdict: ProbeVerdict
    margin: float
    n_samples: int
    n_above: int
    n_below: int
    radius: float
    singular: bool = False
    p4_center: float = 0.0


def kkt_residual(state: KktState, spec: SurfaceSpec) -> NDArray[np.float64]:
    """Stationarity of p4 - l3 p3 - l2 p2 - l1 p1 in each coordinate, then the constraints."""
    x = np.asarray(state.point, dtype=np.float64)
    lam1, lam2, lam3 = state.multipliers
    stationarity = 4.0 * x ** 3 - 3.0 * lam3 * x ** 2 - 2.0 * lam2 * x - lam1
    return np.concatenate([stationarity, constraint_residuals(x, spec.c)])


def kkt_jacobian(state: KktState, spec: SurfaceSpec) -> NDArray[np.float64]:
    x = np.asarray(state.point, dtype=np.float64)
    _, lam2, lam3 = state.multipliers
    jac = np.zeros((8, 8))
    jac[:5, :5] = np.diag(12.0 * x ** 2 - 6.0 * lam3 * x - 2.0 * lam2)
    jac[:5, 5] = -1.0
    jac[:5, 6] = -2.0 * x
    jac[:5, 7] = -3.0 * x ** 2
    jac[5, :5] = 1.0
    jac[6, :5] = 2.0 * x
    jac[7, :5] = 3.0 * x ** 2
    return jac


def newton_solve(
    start: KktState,
    spec: SurfaceSpec,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: float = DEFAULT_TOL,
    max_halvings: int = DEFAULT_MAX_HALVINGS,
) -> Union[KktState, Diverged]:
    """Damped Newton on the KKT system; success means max-norm residual below tol."""
    if max_iter < 1 or tol <= 0:
        raise ValueError(f"need max_iter >= 1 and tol > 0, got {max_iter}, {tol}")

    z = start.as_vector()
    state = start
    res = kkt_residual(state, spec)
    for iteration in range(max_iter + 1):
        if not np.all(np.isfinite(res)):
            return Diverged("non-finite residual", iteration, math.inf)
        res_inf = float(np.max(np.abs(res)))
        if res_inf < tol:
            logger.debug(f"newton converged in {iteration} iterations, residual {res_inf:.3e}")
            return state
        if iteration == max_iter:
            break

        try:
            delta = np.linalg.solve(kkt_jacobian(state, spec), -res)
        except np.linalg.LinAlgError:
            return Diverged("singular KKT Jacobian", iteration, res_inf)

        res_norm = float(np.linalg.norm(res))
        step = 1.0
        for _ in range(max_halvings + 1):
            trial_z = z + step * delta
            if np.all(np.isfinite(trial_z)):
                trial = KktState.from_vector(trial_z)
                trial_res = kkt_residual(trial, spec)
                if np.linalg.norm(trial_res) < res_norm:
                    break
            step *= 0.5
        else:
            return Diverged("no decrease after step halving", iteration, res_inf)
        z, state, res = trial_z, trial, trial_res

    return Diverged("iteration limit reached", max_iter, float(np.max(np.abs(res))))


def random_surface_point(spec: SurfaceSpec, seed=None, **sampler_options) -> Point5:
    return as_point(sample_surface_points(spec, 1, seed, **sampler_options)[0])


def multistart_verify(
    spec: SurfaceSpec,
    n_starts: int,
    seed: Optional[int] = 0,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: float = DEFAULT_TOL,
    max_halvings: int = DEFAULT_MAX_HALVINGS,
    match_tol: float = DEFAULT_MATCH_TOL,
    sampler_options: Optional[Dict[str, Any]] = None,
) -> VerificationReport:
    """Run Newton from n_starts random surface points and match the results to the enumerated orbits.

    Start k draws its point from the k-th child of ``SeedSequence(seed)``, so a
    report depends only on (spec, n_starts, seed) and not on evaluation order.
    Multipliers start at the least-squares fit of the stationarity equations.
    ``sampler_options`` go to the surface sampler that draws the starts.
    """
    if n_starts < 1:
        raise ValueError(f"n_starts must be at least 1, got {n_starts}")

    orbits = analyze(spec).orbits
    matched: Dict[str, int] = {orbit.key: 0 for orbit in orbits}
    unmatched: List[KktState] = []
    n_converged = n_diverged = 0
    max_residual = 0.0

    for child in np.random.SeedSequence(seed).spawn(n_starts):
        point = random_surface_point(spec, child, **(sampler_options or {}))
        outcome = newton_solve(KktState(point, fit_multipliers(point)), spec, max_iter, tol, max_halvings)
        if isinstance(outcome, Diverged):
            n_diverged += 1
            logger.debug(f"start diverged: {outcome.reason} after {outcome.iterations} iterations")
            continue

        n_converged += 1
        max_residual = max(max_residual, float(np.max(np.abs(kkt_residual(outcome, spec)))))
        rep = np.sort(np.asarray(outcome.point))[::-1]
        hit = next((o for o in orbits if np.max(np.abs(rep - o.representative)) <= match_tol), None)
        if hit is None or distinct_value_count(rep, spec.tol_distinct) > 3:
            logger.warning(f"c={spec.c}: converged state {rep} matches no enumerated orbit")
            unmatched.append(outcome)
        else:
            matched[hit.key] += 1

    report = VerificationReport(
        n_starts=n_starts,
        n_converged=n_converged,
        n_diverged=n_diverged,
        matched_orbits=matched,
        unmatched=unmatched,
        max_residual=max_residual,
        seed=seed,
        tol=tol,
    )
    logger.info(f"c={spec.c}: {n_converged}/{n_starts} starts converged, "
                f"{sum(1 for h in matched.values() if h)}/{len(matched)} orbits hit, "
                f"{len(unmatched)} unmatched")
    return report


def _probe_direction(rng: np.random.Generator, basis: Optional[NDArray[np.float64]]) -> NDArray[np.float64]:
    if basis is None:
        d = rng.standard_normal(5)
        d -= d.mean()
    else:
        d = rng.standard_normal(2) @ basis
    return d / np.linalg.norm(d)


def local_extremum_probe(
    p: Point5,
    spec: SurfaceSpec,
    radius: float = DEFAULT_PROBE_RADIUS,
    n_probe: int = DEFAULT_N_PROBE,
    seed=0,
) -> ProbeResult:
    """Compare p4 at p with p4 at n_probe surface points about ``radius`` away.

    Smooth points are perturbed inside their tangent plane. Singular points
    have no tangent plane, so they get an ambient perturbation inside
    {p1 = 0}. Either way the perturbed point is projected back onto the
    surface; projections landing outside [radius / 10, 10 radius] are redrawn.
    """
    if radius <= 0 or n_probe < 1:
        raise ValueError(f"need radius > 0 and n_probe >= 1, got {radius}, {n_probe}")
    if classify_regime(spec) in (Regime.EMPTY, Regime.FIVE_POINTS):
        raise DegenerateRegimeError(f"no surface to probe at c={spec.c}")
    if not on_surface(p, spec):
        raise OffSurfaceError(f"probe centre {np.asarray(p)} is not on A3^C for c={spec.c}")

    center = np.asarray(p, dtype=np.float64)
    try:
        basis = tangent_frame(center, spec).basis
    except SingularPointError:
        basis = None

    rng = np.random.default_rng(seed)
    f0 = power_sum(center, 4)
    diffs: List[float] = []
    attempts = 0
    while len(diffs) < n_probe and attempts < 20 * n_probe:
        attempts += 1
        step = radius * rng.uniform(0.5, 1.0)
        q = project_to_surface(center + step * _probe_direction(rng, basis), spec.c)
        if q is None:
            continue
        dist = float(np.linalg.norm(q - center))
        if not radius / 10.0 <= dist <= 10.0 * radius:
            continue
        diffs.append(power_sum(q, 4) - f0)

    if not diffs:
        raise DegenerateRegimeError(f"no probe sample could be projected onto A3^C near {center}")
    if len(diffs) < n_probe:
        logger.warning(f"probe collected {len(diffs)} of {n_probe} samples after {attempts} attempts")

    values = np.array(diffs)
    n_above = int(np.count_nonzero(values > 0))
    n_below = int(np.count_nonzero(values < 0))
    if n_above == len(values):
        verdict = ProbeVerdict.LOCAL_MIN
    elif n_below == len(values):
        verdict = ProbeVerdict.LOCAL_MAX
    else:
        verdict = ProbeVerdict.NEITHER

    return ProbeResult(
        verdict=verdict,
        margin=float(np.min(np.abs(values))),
        n_samples=len(values),
        n_above=n_above,
        n_below=n_below,
        radius=radius,
        singular=basis is None,
        p4_center=f0,
    )

