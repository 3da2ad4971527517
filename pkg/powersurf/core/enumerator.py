"""Closed-form enumeration of the critical orbits of p4 on A3^C.

At a critical point the coordinates are roots of 4t^3 - 3*l3*t^2 - 2*l2*t - l1,
so they take at most three values. Up to permutation there are two smooth
families, each reduced to a depressed cubic in a parameter t:

* type 1, values (a, a, b, b, c): 15 t^3 - 3/2 t + C = 0,
  a, b = (t +- sqrt(1 - 5 t^2)) / 2, c = -2 t, t in (-1/sqrt5, 1/sqrt5);
* type 2, values (alpha x3, beta, gamma): 10/9 t^3 - 3/2 t + C = 0,
  alpha = -t/3, beta, gamma = (t +- sqrt(2 - 5/3 t^2)) / 2,
  t in (-sqrt(6/5), sqrt(6/5)).

Two-valued points only exist at |C| = 1/sqrt30 (singular points) and
|C| = 3/sqrt20 (the surface is five points); they are listed by
``singular_orbits``.
"""

import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .cubic import solve_cubic_on_interval
from .errors import DegenerateRootError, InconsistentTopologyError, WrongRegimeError
from .surface import (
    C_EDGE,
    C_SING,
    DEFAULT_TOL_DISTINCT,
    Multipliers,
    Point5,
    Regime,
    SurfaceSpec,
    as_point,
    classify_regime,
    distinct_value_count,
    fit_multipliers,
    power_sum,
)
from .topology import euler_characteristic, genus

logger = logging.getLogger(__name__)

TYPE1_EDGE = 1.0 / math.sqrt(5.0)
TYPE1_SPLIT = C_SING
TYPE2_EDGE = math.sqrt(6.0 / 5.0)
TYPE2_SPLIT = 3.0 / (2.0 * math.sqrt(5.0))
DEFAULT_TOL_END = 1e-9

SINGULAR = "singular"
ISOLATED = "isolated"

MorseIndex = Union[int, str]

COMPUTED_LABELS = {0: "minimum", 1: "saddle", 2: "maximum"}
PLURAL_LABELS = {"minimum": "minima", "saddle": "saddles", "maximum": "maxima"}


@dataclass(frozen=True, eq=False)
class CriticalOrbit:
    """One permutation orbit of critical points.

    ``values`` lists the distinct coordinate values in the order of
    ``pattern``; ``representative`` is sorted descending.
    """
    kind: str
    pattern: Tuple[int, ...]
    t: float
    values: Tuple[float, ...]
    representative: Point5 = field(repr=False)
    multipliers: Multipliers
    p4_value: float
    morse_index: MorseIndex
    multiplicity: int

    @property
    def key(self) -> str:
        return orbit_key(self)

    @property
    def has_morse_index(self) -> bool:
        return isinstance(self.morse_index, int)


@dataclass
class RegimeReport:
    spec: SurfaceSpec
    regime: Regime
    orbits: List[CriticalOrbit]
    counts: Tuple[int, int, int]
    n_singular: int = 0
    n_isolated: int = 0
    euler_characteristic: Optional[int] = None
    n_components: Optional[int] = None
    genus: Optional[int] = None
    notes: List[str] = field(default_factory=list)

    @property
    def total_points(self) -> int:
        return sum(o.multiplicity for o in self.orbits)

    def summary_line(self) -> str:
        n_min, n_saddle, n_max = self.counts
        line = f"{self.total_points} critical points: {n_min} min / {n_saddle} saddle / {n_max} max"
        if self.n_singular:
            line += f" + {self.n_singular} singular"
        if self.n_isolated:
            line += f" + {self.n_isolated} isolated"
        if self.euler_characteristic is not None:
            line += f"; chi={self.euler_characteristic}"
        if self.genus is not None:
            line += f"; genus={self.genus}"
        return line


def orbit_size(pattern: Sequence[int]) -> int:
    """Number of distinct coordinate assignments of a value multiset with this pattern."""
    if not pattern or any(int(k) != k or k < 1 for k in pattern) or sum(pattern) != 5:
        raise ValueError(f"not a partition of 5: {pattern}")
    return math.factorial(5) // math.prod(math.factorial(k) for k in pattern)


def vieta_multipliers(r1: float, r2: float, r3: float) -> Multipliers:
    """Multipliers with 4t^3 - 3*l3*t^2 - 2*l2*t - l1 = 4(t - r1)(t - r2)(t - r3)."""
    e1 = r1 + r2 + r3
    e2 = r1 * r2 + r1 * r3 + r2 * r3
    e3 = r1 * r2 * r3
    return 4.0 * e3, -2.0 * e2, 4.0 * e1 / 3.0


def orbit_key(orbit: CriticalOrbit) -> str:
    coords = ",".join(f"{round(float(v), 9) + 0.0:.9f}" for v in orbit.representative)
    return f"{'-'.join(str(k) for k in orbit.pattern)}|{coords}"


def orbit_points(orbit: CriticalOrbit) -> List[Point5]:
    perms = sorted(set(itertools.permutations(orbit.representative.tolist())), reverse=True)
    return [as_point(p) for p in perms]


def classify_by_root_order(orbit: CriticalOrbit, tol_distinct: float = DEFAULT_TOL_DISTINCT) -> int:
    """Morse index from the position of the repeated values among the three roots.

    P3 has positive leading coefficient, so P3' > 0 at the outer roots and
    P3' < 0 at the middle one. Type 1: the form is 2 P3'(a) dx^2 + 2 P3'(b) dz^2.
    Type 2: the form is P3'(alpha) on the plane dx + dy + dz = 0.
    """
    if orbit.pattern not in ((2, 2, 1), (3, 1, 1)):
        raise ValueError(f"no root-order rule for pattern {orbit.pattern}")
    ordered = sorted(orbit.values)
    if min(np.diff(ordered)) <= tol_distinct:
        raise DegenerateRootError(f"roots {ordered} are not distinct")

    def is_middle(v: float) -> bool:
        return ordered[0] < v < ordered[2]

    if orbit.pattern == (2, 2, 1):
        return 0 if is_middle(orbit.values[2]) else 1
    return 2 if is_middle(orbit.values[0]) else 0


def _boundary_level(spec: SurfaceSpec, regime: Regime) -> Optional[float]:
    if regime == Regime.SINGULAR_SURFACE:
        return math.copysign(C_SING, spec.c)
    if regime == Regime.FIVE_POINTS:
        return math.copysign(C_EDGE, spec.c)
    return None


def _admissible_roots(a3: float, spec: SurfaceSpec, edge: float, split: float, tol_end: float) -> List[float]:
    """Roots t of a3 t^3 - 3/2 t + c that may carry a smooth orbit.

    A level inside the boundary band is snapped to the exact boundary, where
    the excluded t values (interval ends and split points) are roots; those
    within tol_end are dropped, as are double roots. At any other level every
    root strictly inside the interval is returned and ``_build_orbit`` drops
    those whose coordinate values coincide.
    """
    boundary = _boundary_level(spec, classify_regime(spec))
    c = spec.c if boundary is None else boundary
    margin = 0.0 if boundary is None else tol_end
    kept = []
    for root in solve_cubic_on_interval(a3, -1.5, c, -edge, edge, margin):
        if root.degenerate or (boundary is not None and abs(abs(root.value) - split) <= tol_end):
            logger.debug(f"dropping degenerate root t={root.value} of {a3} t^3 - 3/2 t + {c}")
            continue
        kept.append(root.value)
    return kept


def _build_orbit(kind: str, pattern: Tuple[int, ...], t: float, values: Tuple[float, ...],
                 spec: SurfaceSpec) -> Optional[CriticalOrbit]:
    if distinct_value_count(values, spec.tol_distinct) < 3:
        logger.debug(f"dropping t={t}: coordinate values {values} are not distinct")
        return None
    coords = [v for v, k in zip(values, pattern) for _ in range(k)]
    rep = as_point(sorted(coords, reverse=True))
    draft = CriticalOrbit(
        kind=kind,
        pattern=pattern,
        t=t,
        values=values,
        representative=rep,
        multipliers=vieta_multipliers(*values),
        p4_value=power_sum(rep, 4),
        morse_index=-1,
        multiplicity=orbit_size(pattern),
    )
    index = classify_by_root_order(draft, spec.tol_distinct)
    return replace(draft, morse_index=index)


def enumerate_type1(spec: SurfaceSpec, tol_end: float = DEFAULT_TOL_END) -> List[CriticalOrbit]:
    orbits = []
    for t in _admissible_roots(15.0, spec, TYPE1_EDGE, TYPE1_SPLIT, tol_end):
        s = math.sqrt(max(0.0, 1.0 - 5.0 * t * t))
        values = ((t + s) / 2.0, (t - s) / 2.0, -2.0 * t)
        orbits.append(_build_orbit("type1", (2, 2, 1), t, values, spec))
    return [o for o in orbits if o is not None]


def enumerate_type2(spec: SurfaceSpec, tol_end: float = DEFAULT_TOL_END) -> List[CriticalOrbit]:
    orbits = []
    for t in _admissible_roots(10.0 / 9.0, spec, TYPE2_EDGE, TYPE2_SPLIT, tol_end):
        r = math.sqrt(max(0.0, 2.0 - 5.0 / 3.0 * t * t))
        values = (-t / 3.0, (t + r) / 2.0, (t - r) / 2.0)
        orbits.append(_build_orbit("type2", (3, 1, 1), t, values, spec))
    return [o for o in orbits if o is not None]


def singular_orbits(spec: SurfaceSpec) -> List[CriticalOrbit]:
    regime = classify_regime(spec)
    sign = math.copysign(1.0, spec.c)
    if regime == Regime.SINGULAR_SURFACE:
        kind, pattern, t = SINGULAR, (3, 2), sign * C_SING
        values = (-2.0 * sign / math.sqrt(30.0), 3.0 * sign / math.sqrt(30.0))
    elif regime == Regime.FIVE_POINTS:
        kind, pattern, t = ISOLATED, (4, 1), -sign * TYPE1_EDGE
        values = (-sign / math.sqrt(20.0), 4.0 * sign / math.sqrt(20.0))
    else:
        raise WrongRegimeError(f"no two-valued surface points at c={spec.c} (regime {regime.value})")

    coords = [v for v, k in zip(values, pattern) for _ in range(k)]
    rep = as_point(sorted(coords, reverse=True))
    return [CriticalOrbit(
        kind=kind,
        pattern=pattern,
        t=t,
        values=values,
        representative=rep,
        multipliers=fit_multipliers(rep),
        p4_value=power_sum(rep, 4),
        morse_index=kind,
        multiplicity=orbit_size(pattern),
    )]


def published_label(orbit: CriticalOrbit) -> Optional[str]:
    """Label the published answer attaches to this orbit, read off its root tables."""
    if orbit.kind == "type1":
        return "maximum" if abs(orbit.t) < TYPE1_SPLIT else "saddle"
    if orbit.kind == "type2":
        return "minimum" if abs(orbit.t) < TYPE2_SPLIT else "maximum"
    if orbit.kind == SINGULAR:
        return "maximum"
    return None


@dataclass(frozen=True)
class RootIntervalCounts:
    cubic: str
    bounds: Tuple[float, float, float, float]
    counts: Tuple[int, int, int]
    on_excluded: Tuple[float, ...]


def root_interval_table(spec: SurfaceSpec, tol_end: float = DEFAULT_TOL_END) -> List[RootIntervalCounts]:
    """Roots of both reduced cubics sorted into their three open t-intervals.

    At a level inside the boundary band the cubics are solved at the exact
    boundary and roots within tol_end of an excluded t value (interval ends or
    the split points) are listed separately in ``on_excluded``.
    """
    boundary = _boundary_level(spec, classify_regime(spec))
    c = spec.c if boundary is None else boundary
    margin = 0.0 if boundary is None else tol_end
    table = []
    for name, a3, edge, split in (("type1", 15.0, TYPE1_EDGE, TYPE1_SPLIT),
                                  ("type2", 10.0 / 9.0, TYPE2_EDGE, TYPE2_SPLIT)):
        bounds = (-edge, -split, split, edge)
        counts = [0, 0, 0]
        excluded = []
        for root in solve_cubic_on_interval(a3, -1.5, c, tol_end=0.0):
            t = root.value
            if any(abs(t - b) <= margin for b in bounds):
                excluded.append(t)
            elif -edge < t < -split:
                counts[0] += 1
            elif -split < t < split:
                counts[1] += 1
            elif split < t < edge:
                counts[2] += 1
        table.append(RootIntervalCounts(name, bounds, tuple(counts), tuple(excluded)))
    return table


def _reconciliation_notes(orbits: List[CriticalOrbit]) -> List[str]:
    mismatches: Counter = Counter()
    for orbit in orbits:
        published = published_label(orbit)
        if not orbit.has_morse_index or published is None:
            continue
        computed = COMPUTED_LABELS[orbit.morse_index]
        if computed != published:
            mismatches[(orbit.morse_index, computed, published)] += orbit.multiplicity

    notes = []
    for (index, computed, published), n in sorted(mismatches.items()):
        notes.append(
            f"label reconciliation: {n} index-{index} points ({computed} by projected-Hessian "
            f"eigenvalues) are published as {PLURAL_LABELS[published]}")
    return notes


def analyze(spec: SurfaceSpec, tol_end: float = DEFAULT_TOL_END) -> RegimeReport:
    regime = classify_regime(spec)
    orbits: List[CriticalOrbit] = []
    notes: List[str] = []

    if regime == Regime.EMPTY:
        notes.append("|c| > 3/sqrt(20): the surface is empty")
    elif regime == Regime.FIVE_POINTS:
        orbits = singular_orbits(spec)
        notes.append("|c| = 3/sqrt(20): the surface degenerates into 5 isolated points")
    else:
        orbits = enumerate_type1(spec, tol_end) + enumerate_type2(spec, tol_end)
        if regime == Regime.SINGULAR_SURFACE:
            orbits += singular_orbits(spec)
    orbits.sort(key=lambda o: (o.p4_value, o.key))

    by_index: Dict[int, int] = {0: 0, 1: 0, 2: 0}
    for orbit in orbits:
        if orbit.has_morse_index:
            by_index[orbit.morse_index] += orbit.multiplicity
    counts = (by_index[0], by_index[1], by_index[2])
    n_singular = sum(o.multiplicity for o in orbits if o.kind == SINGULAR)
    n_isolated = sum(o.multiplicity for o in orbits if o.kind == ISOLATED)

    notes.extend(_reconciliation_notes(orbits))

    if regime == Regime.SINGULAR_SURFACE:
        singular = next(o for o in orbits if o.kind == SINGULAR)
        smooth_values = [o.p4_value for o in orbits if o.has_morse_index]
        if counts[0] == 0 and all(v > singular.p4_value for v in smooth_values):
            notes.append(
                f"no index-0 orbit in the smooth part and p4={singular.p4_value:.12g} at the "
                f"singular points is below every smooth critical value, so the singular points "
                f"are global minima (published as maxima)")

    chi = n_components = surface_genus = None
    if regime.is_smooth:
        chi = euler_characteristic(*counts)
        n_components = 1 if regime == Regime.SMOOTH_CONNECTED else 5
        try:
            surface_genus = genus(chi, n_components)
        except InconsistentTopologyError as e:
            logger.warning(f"c={spec.c}: {e}")
            notes.append(f"no genus: {e}")
        notes.append("genus assumes orientability: A3^C is a regular level set of a map R^5 -> R^3")

    report = RegimeReport(
        spec=spec,
        regime=regime,
        orbits=orbits,
        counts=counts,
        n_singular=n_singular,
        n_isolated=n_isolated,
        euler_characteristic=chi,
        n_components=n_components,
        genus=surface_genus,
        notes=notes,
    )
    logger.info(f"c={spec.c}: {regime.value}, {len(orbits)} orbits, {report.summary_line()}")
    return report
