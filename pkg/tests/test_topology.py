#!/usr/bin/env python3
"""
Tests for Euler characteristic, genus, component estimates and the C sweep
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest
from numpy.testing import assert_allclose

# Add project to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from powersurf.core.enumerator import analyze
from powersurf.core.errors import DegenerateRegimeError, InconsistentTopologyError, WrongRegimeError
from powersurf.core.surface import C_EDGE, C_SING, SurfaceSpec, constraint_residuals
from powersurf.core.topology import (
    ProfileEntry,
    component_count,
    connecting_curve,
    count_components,
    critical_value_profile,
    euler_characteristic,
    genus,
    sweep,
    sweep_grid,
)
from powersurf.utils.sampling import sample_surface_points


def test_euler_characteristic():
    assert euler_characteristic(30, 60, 20) == -10
    assert euler_characteristic(20, 30, 20) == 10
    assert euler_characteristic(0, 0, 0) == 0
    with pytest.raises(ValueError):
        euler_characteristic(-1, 0, 0)


def test_genus():
    assert genus(-10, 1) == 6
    assert genus(10, 5) == 0
    assert genus(2, 1) == 0
    with pytest.raises(InconsistentTopologyError):
        genus(3, 1)
    with pytest.raises(InconsistentTopologyError):
        genus(4, 1)


def test_count_components_on_synthetic_clusters():
    rng = np.random.default_rng(0)
    a = rng.normal(0.0, 0.01, size=(200, 5))
    b = rng.normal(1.0, 0.01, size=(200, 5))
    estimate = count_components(np.vstack([a, b]), 0.2)
    assert estimate.n_components == 2
    assert estimate.component_sizes == (200, 200)
    assert estimate.largest_component_fraction == 0.5
    assert count_components(np.vstack([a, b]), 5.0).n_components == 1
    with pytest.raises(ValueError):
        count_components(a, 0.0)


def test_component_count_is_monotone_in_epsilon():
    points = sample_surface_points(SurfaceSpec(0.3), 3000, rng=8)
    counts = [count_components(points, eps).n_components for eps in (0.02, 0.05, 0.1, 0.2, 0.4)]
    assert counts == sorted(counts, reverse=True)


@pytest.mark.parametrize("seed", [0, 1, 2])
@pytest.mark.parametrize("c, expected", [(0.0, 1), (0.4, 5)])
def test_component_count(c, expected, seed):
    spec = SurfaceSpec(c)
    estimate = component_count(spec, n_samples=20000, epsilon=0.15, seed=seed)
    assert estimate.n_components == expected
    report = analyze(spec)
    assert report.euler_characteristic == 2 * estimate.n_components - 2 * report.genus


def test_component_count_degenerate_regimes():
    assert component_count(SurfaceSpec(C_EDGE)).n_components == 5
    with pytest.raises(DegenerateRegimeError):
        component_count(SurfaceSpec(0.8))
    with pytest.raises(ValueError):
        component_count(SurfaceSpec(0.0), n_samples=50)


def test_critical_value_profile_at_zero():
    profile = critical_value_profile(SurfaceSpec(0.0))
    assert [(e.index, e.multiplicity) for e in profile] == [(0, 30), (1, 60), (2, 20)]
    assert_allclose([e.p4_value for e in profile], [0.25, 0.3, 0.5], atol=1e-12)


@pytest.mark.parametrize("c", [-0.6, -0.4, -0.1, 0.05, 0.3, 0.5])
def test_critical_value_profile_ends(c):
    profile = critical_value_profile(SurfaceSpec(c))
    assert profile[0].index == 0
    assert profile[-1].index == 2
    values = [e.p4_value for e in profile]
    assert values == sorted(values)


def test_critical_value_profile_at_five_spheres():
    profile = critical_value_profile(SurfaceSpec(0.4))
    assert len(profile) == 3
    assert sorted(e.index for e in profile) == [0, 1, 2]
    assert all(isinstance(e, ProfileEntry) for e in profile)


def test_critical_value_profile_needs_smooth_surface():
    with pytest.raises(WrongRegimeError):
        critical_value_profile(SurfaceSpec(C_SING))
    with pytest.raises(WrongRegimeError):
        critical_value_profile(SurfaceSpec(0.7))


def test_sweep_grid():
    assert len(sweep_grid(-0.7, 0.7, 0.01)) == 141
    assert sweep_grid(0.0, 0.001, 0.01) == [0.0]
    with pytest.raises(ValueError):
        sweep_grid(0.1, 0.1, 0.01)
    with pytest.raises(ValueError):
        sweep_grid(0.0, 0.1, -0.01)


def test_sweep_inside_connected_regime():
    result = sweep(0.0, 0.1, 0.01)
    assert len(result.rows) == 11
    assert all(row.counts == (30, 60, 20) for row in result.rows)
    assert all(row.regime.value == "smooth-connected" for row in result.rows)
    assert result.transitions == []


def test_single_point_sweep():
    result = sweep(0.2, 0.201, 0.01)
    assert len(result.rows) == 1
    assert result.transitions == []


def test_sweep_brackets_every_boundary():
    result = sweep(-0.7, 0.7, 0.005)
    assert len(result.transitions) == 4
    for boundary in (-C_EDGE, -C_SING, C_SING, C_EDGE):
        bracket = [t for t in result.transitions if t.brackets(boundary)]
        assert len(bracket) == 1
        assert bracket[0].c_right - bracket[0].c_left <= 0.005 + 1e-12


def test_sweep_rows_are_symmetric_and_chi_is_constant_between_transitions():
    result = sweep(-0.7, 0.7, 0.01)
    rows = {row.c: row for row in result.rows}
    for row in result.rows:
        mirror = rows[round(-row.c, 12) + 0.0]
        assert (mirror.regime, mirror.counts) == (row.regime, row.counts)

    segments, current = [], []
    cuts = {t.c_right for t in result.transitions}
    for row in result.rows:
        if row.c in cuts:
            segments.append(current)
            current = []
        current.append(row)
    segments.append(current)
    assert len(segments) == 5
    for segment in segments:
        assert len({row.euler_characteristic for row in segment}) == 1


def test_connecting_curve_lies_on_zero_level():
    for s in np.linspace(-1.0, 1.0, 41):
        assert_allclose(constraint_residuals(connecting_curve(float(s)), 0.0), 0.0, atol=1e-15)

    maximum = next(o for o in analyze(SurfaceSpec(0.0)).orbits if o.kind == "type2")
    for s in (-1.0, 0.0, 1.0):
        point = np.sort(connecting_curve(s))[::-1]
        assert_allclose(point, maximum.representative, atol=1e-15)

    with pytest.raises(ValueError):
        connecting_curve(1.5)
    assert connecting_curve(0.5)[3] == pytest.approx(0.5 / math.sqrt(2))
