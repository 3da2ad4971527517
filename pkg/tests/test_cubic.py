#!/usr/bin/env python3
"""
Tests for the depressed cubic solver
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Add project to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from powersurf.core.cubic import solve_cubic_on_interval


def values(roots):
    return [r.value for r in roots]


def test_three_real_roots():
    roots = solve_cubic_on_interval(1.0, -1.0, 0.0)
    assert values(roots) == pytest.approx([-1.0, 0.0, 1.0], abs=1e-14)
    assert not any(r.degenerate for r in roots)


def test_double_root_is_flagged():
    # (t - 1)^2 (t + 2) = t^3 - 3t + 2
    roots = solve_cubic_on_interval(1.0, -3.0, 2.0)
    assert values(roots) == pytest.approx([-2.0, 1.0], abs=1e-12)
    assert [r.degenerate for r in roots] == [False, True]


def test_triple_root():
    roots = solve_cubic_on_interval(2.0, 0.0, 0.0)
    assert len(roots) == 1
    assert roots[0].value == 0.0
    assert roots[0].degenerate


def test_single_real_root():
    roots = solve_cubic_on_interval(1.0, 1.0, 1.0)
    assert values(roots) == pytest.approx([-0.6823278038280193], abs=1e-14)


def test_interval_filter_and_order():
    edge = 1 / math.sqrt(5)
    roots = solve_cubic_on_interval(15.0, -1.5, 0.0, -edge, edge)
    assert values(roots) == pytest.approx([-1 / math.sqrt(10), 0.0, 1 / math.sqrt(10)], abs=1e-15)

    only_positive = solve_cubic_on_interval(15.0, -1.5, 0.0, 0.1, edge)
    assert values(only_positive) == pytest.approx([1 / math.sqrt(10)], abs=1e-15)


def test_roots_near_interval_ends_are_dropped():
    # root at exactly 1 is within tol_end of the upper end
    roots = solve_cubic_on_interval(1.0, -1.0, 0.0, -2.0, 1.0 + 1e-12, tol_end=1e-9)
    assert values(roots) == pytest.approx([-1.0, 0.0], abs=1e-14)


@pytest.mark.parametrize("c", np.linspace(-0.67, 0.67, 41))
@pytest.mark.parametrize("a3", [15.0, 10.0 / 9.0])
def test_reduced_cubic_residuals(a3, c):
    for root in solve_cubic_on_interval(a3, -1.5, c):
        t = root.value
        assert abs(a3 * t ** 3 - 1.5 * t + c) < 1e-13


def test_invalid_arguments():
    with pytest.raises(ValueError):
        solve_cubic_on_interval(0.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        solve_cubic_on_interval(1.0, 1.0, 1.0, 1.0, 1.0)
