"""Topological invariants of A3^C and the bifurcation sweep over C."""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from numpy.typing import NDArray
from scipy.spatial import cKDTree

from ..utils.sampling import sample_surface_points
from ..utils.union_find import DisjointSet
from .errors import DegenerateRegimeError, InconsistentTopologyError, WrongRegimeError
from .surface import Point5, Regime, SurfaceSpec, as_point, classify_regime

logger = logging.getLogger(__name__)

DEFAULT_N_SAMPLES = 20000
DEFAULT_EPSILON = 0.15
VALUE_MERGE_TOL = 1e-12
PAIR_CHUNK = 200_000


@dataclass(frozen=True)
class ComponentEstimate:
    n_components: int
    n_samples: int
    epsilon: float
    largest_component_fraction: float
    component_sizes: Tuple[int, ...] = ()


@dataclass(frozen=True)
class ProfileEntry:
    p4_value: float
    index: int
    multiplicity: int


@dataclass(frozen=True)
class SweepRow:
    c: float
    regime: Regime
    n_orbits: int
    counts: Tuple[int, int, int]
    euler_characteristic: Optional[int]
    genus: Optional[int]
    p4_values: Tuple[float, ...]


@dataclass(frozen=True)
class Transition:
    c_left: float
    c_right: float
    regime_left: Regime
    regime_right: Regime
    counts_left: Tuple[int, int, int]
    counts_right: Tuple[int, int, int]

    def brackets(self, value: float) -> bool:
        return self.c_left <= value <= self.c_right


@dataclass
class SweepResult:
    rows: List[SweepRow] = field(default_factory=list)
    transitions: List[Transition] = field(default_factory=list)


def euler_characteristic(n_min: int, n_saddle: int, n_max: int) -> int:
    if min(n_min, n_saddle, n_max) < 0:
        raise ValueError(f"critical point counts must be non-negative: {(n_min, n_saddle, n_max)}")
    return n_min - n_saddle + n_max


def genus(chi: int, n_components: int) -> int:
    """Total genus g of a closed orientable surface with chi = 2 n - 2 g."""
    if n_components < 1:
        raise InconsistentTopologyError(f"need at least one component, got {n_components}")
    excess = 2 * n_components - chi
    if excess < 0 or excess % 2:
        raise InconsistentTopologyError(
            f"chi={chi} with {n_components} component(s) is not a closed orientable surface")
    return excess // 2


def count_components(points: NDArray[np.float64], epsilon: float) -> ComponentEstimate:
    """Connected components of the epsilon-neighbourhood graph of a point cloud."""
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    n = len(points)
    pairs = cKDTree(points).query_pairs(epsilon, output_type="ndarray")
    dsu = DisjointSet(n)
    for start in range(0, len(pairs), PAIR_CHUNK):
        chunk = pairs[start:start + PAIR_CHUNK]
        for i, j in zip(chunk[:, 0].tolist(), chunk[:, 1].tolist()):
            dsu.union(i, j)
    sizes = dsu.component_sizes()
    logger.debug(f"{n} points, eps={epsilon}: {len(pairs)} edges, {len(sizes)} components")
    return ComponentEstimate(
        n_components=len(sizes),
        n_samples=n,
        epsilon=epsilon,
        largest_component_fraction=sizes[0] / n if n else 0.0,
        component_sizes=tuple(sizes),
    )


def component_count(
    spec: SurfaceSpec,
    n_samples: int = DEFAULT_N_SAMPLES,
    epsilon: float = DEFAULT_EPSILON,
    seed=0,
    sampler_options: Optional[Dict[str, Any]] = None,
) -> ComponentEstimate:
    regime = classify_regime(spec)
    if regime == Regime.EMPTY:
        raise DegenerateRegimeError(f"the surface is empty at c={spec.c}")
    if regime == Regime.FIVE_POINTS:
        return ComponentEstimate(5, 0, epsilon, 0.2, (1, 1, 1, 1, 1))
    if n_samples < 100:
        raise ValueError(f"component estimation needs at least 100 samples, got {n_samples}")

    points = sample_surface_points(spec, n_samples, seed, **(sampler_options or {}))
    estimate = count_components(points, epsilon)
    logger.info(f"c={spec.c}: {estimate.n_components} component(s) from {n_samples} samples")
    return estimate


def critical_value_profile(spec: SurfaceSpec) -> List[ProfileEntry]:
    """Critical values of p4 in ascending order with their index and point count."""
    # Import here to avoid circular imports
    from .enumerator import analyze

    report = analyze(spec)
    if not report.regime.is_smooth:
        raise WrongRegimeError(f"critical value profile needs a smooth surface, got {report.regime.value}")

    profile: List[ProfileEntry] = []
    for orbit in sorted(report.orbits, key=lambda o: o.p4_value):
        last = profile[-1] if profile else None
        if last and last.index == orbit.morse_index and abs(last.p4_value - orbit.p4_value) <= VALUE_MERGE_TOL:
            profile[-1] = ProfileEntry(last.p4_value, last.index, last.multiplicity + orbit.multiplicity)
        else:
            profile.append(ProfileEntry(orbit.p4_value, orbit.morse_index, orbit.multiplicity))
    return profile


def _distinct_values(values: List[float]) -> Tuple[float, ...]:
    distinct: List[float] = []
    for v in sorted(values):
        if not distinct or v - distinct[-1] > VALUE_MERGE_TOL:
            distinct.append(v)
    return tuple(distinct)


def sweep_grid(c_lo: float, c_hi: float, step: float) -> List[float]:
    if not c_lo < c_hi:
        raise ValueError(f"empty sweep range [{c_lo}, {c_hi}]")
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    n = math.floor((c_hi - c_lo) / step + 1e-9)
    return [round(c_lo + k * step, 12) + 0.0 for k in range(n + 1)]


def sweep(c_lo: float, c_hi: float, step: float, **spec_kwargs) -> SweepResult:
    """Per-C summary rows on a uniform grid plus the intervals where the census changes."""
    # Import here to avoid circular imports
    from .enumerator import analyze

    result = SweepResult()
    for c in sweep_grid(c_lo, c_hi, step):
        report = analyze(SurfaceSpec(c, **spec_kwargs))
        result.rows.append(SweepRow(
            c=c,
            regime=report.regime,
            n_orbits=len(report.orbits),
            counts=report.counts,
            euler_characteristic=report.euler_characteristic,
            genus=report.genus,
            p4_values=_distinct_values([o.p4_value for o in report.orbits]),
        ))

    for left, right in zip(result.rows, result.rows[1:]):
        if left.regime != right.regime or left.counts != right.counts:
            result.transitions.append(Transition(
                left.c, right.c, left.regime, right.regime, left.counts, right.counts))
    logger.info(f"sweep [{c_lo}, {c_hi}] step {step}: {len(result.rows)} rows, "
                f"{len(result.transitions)} transitions")
    return result


def connecting_curve(s: float) -> Point5:
    """Curve on A3^0 through three type-2 critical points (s = -1, 0, 1)."""
    if not -1.0 <= s <= 1.0:
        raise ValueError(f"curve parameter must lie in [-1, 1], got {s}")
    w = math.sqrt((1.0 - s * s) / 2.0)
    r = s / math.sqrt(2.0)
    return as_point((w, -w, 0.0, r, -r))
