"""Real roots of depressed cubics a3*t^3 + a1*t + a0 on an open interval."""

import logging
import math
from dataclasses import dataclass
from typing import List

logger = logging.getLogger(__name__)

DISCRIMINANT_RTOL = 1e-13
POLISH_STEPS = 3


@dataclass(frozen=True)
class CubicRoot:
    value: float
    degenerate: bool = False


def _polish(a3: float, a1: float, a0: float, t: float) -> float:
    for _ in range(POLISH_STEPS):
        deriv = 3.0 * a3 * t * t + a1
        if deriv == 0.0:
            break
        t -= (a3 * t ** 3 + a1 * t + a0) / deriv
    return t


def _all_real_roots(a3: float, a1: float, a0: float) -> List[CubicRoot]:
    p = a1 / a3
    q = a0 / a3
    disc = 4.0 * p ** 3 + 27.0 * q ** 2
    scale = max(4.0 * abs(p) ** 3, 27.0 * q * q)

    if abs(disc) <= DISCRIMINANT_RTOL * scale:
        if p == 0.0:
            return [CubicRoot(0.0, degenerate=True)]
        double = -1.5 * q / p
        simple = _polish(a3, a1, a0, 3.0 * q / p)
        return [CubicRoot(simple), CubicRoot(double, degenerate=True)]

    if disc < 0.0:
        # Three distinct real roots: trigonometric form.
        m = 2.0 * math.sqrt(-p / 3.0)
        arg = max(-1.0, min(1.0, 1.5 * q / p * math.sqrt(-3.0 / p)))
        theta = math.acos(arg) / 3.0
        roots = [m * math.cos(theta - 2.0 * math.pi * k / 3.0) for k in range(3)]
        return [CubicRoot(_polish(a3, a1, a0, t)) for t in roots]

    # One real root; pick the Cardano branch that avoids cancellation.
    s = math.sqrt(disc / 108.0)
    u = math.cbrt(-0.5 * q - math.copysign(s, q))
    t = u - p / (3.0 * u) if u != 0.0 else 0.0
    return [CubicRoot(_polish(a3, a1, a0, t))]


def solve_cubic_on_interval(
    a3: float,
    a1: float,
    a0: float,
    lo: float = -math.inf,
    hi: float = math.inf,
    tol_end: float = 1e-9,
) -> List[CubicRoot]:
    """Real roots of a3*t^3 + a1*t + a0 inside (lo + tol_end, hi - tol_end), ascending.

    A root that is double up to DISCRIMINANT_RTOL, relative to the larger
    of 4p^3 and 27q^2, is returned once with ``degenerate=True``.
    """
    if a3 == 0.0:
        raise ValueError("leading coefficient a3 must be nonzero")
    if not lo < hi:
        raise ValueError(f"empty interval ({lo}, {hi})")

    roots = _all_real_roots(a3, a1, a0)
    inside = [r for r in roots if lo + tol_end < r.value < hi - tol_end]
    logger.debug(f"cubic ({a3}, {a1}, {a0}): roots {[r.value for r in roots]}, "
                 f"{len(inside)} inside ({lo}, {hi})")
    return sorted(inside, key=lambda r: r.value)
