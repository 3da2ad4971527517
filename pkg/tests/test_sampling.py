#!/usr/bin/env python3
"""
Tests for surface sampling, projection and the disjoint-set helper
"""

import sys
from pathlib import Path

import numpy as np
import pytest
from numpy.testing import assert_allclose

# Add project to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from powersurf.core.errors import DegenerateRegimeError
from powersurf.core.surface import C_EDGE, C_SING, SurfaceSpec, as_point, constraint_residuals
from powersurf.utils.sampling import project_to_surface, sample_surface_points
from powersurf.utils.union_find import DisjointSet


@pytest.mark.parametrize("c", [0.0, -0.1, C_SING, 0.4, -0.6])
def test_samples_lie_on_surface(c):
    points = sample_surface_points(SurfaceSpec(c), 2000, rng=1)
    assert points.shape == (2000, 5)
    residuals = np.array([constraint_residuals(p, c) for p in points])
    assert np.max(np.abs(residuals)) < 1e-10


def test_sampling_is_seeded():
    spec = SurfaceSpec(0.2)
    assert_allclose(sample_surface_points(spec, 100, rng=5), sample_surface_points(spec, 100, rng=5), atol=0.0)
    assert not np.allclose(sample_surface_points(spec, 100, rng=5), sample_surface_points(spec, 100, rng=6))


def test_sampling_rejects_degenerate_regimes():
    with pytest.raises(DegenerateRegimeError):
        sample_surface_points(SurfaceSpec(0.7), 10)
    with pytest.raises(DegenerateRegimeError):
        sample_surface_points(SurfaceSpec(C_EDGE), 10)
    with pytest.raises(ValueError):
        sample_surface_points(SurfaceSpec(0.0), 0)


def test_projection_returns_nearby_surface_point():
    spec = SurfaceSpec(0.1)
    p = sample_surface_points(spec, 1, rng=3)[0]
    q = project_to_surface(p + 1e-3 * np.array([1.0, -2.0, 0.5, 0.3, 0.2]), spec.c)
    assert q is not None
    assert np.max(np.abs(constraint_residuals(q, spec.c))) < 1e-12
    assert np.linalg.norm(q - p) < 1e-2


def test_projection_next_to_singular_point():
    s = 1 / np.sqrt(30)
    p = as_point([-2 * s] * 3 + [3 * s] * 2)
    q = project_to_surface(p + 1e-3 * np.array([0.3, -0.1, -0.2, 0.4, -0.4]), C_SING)
    assert q is not None
    assert np.max(np.abs(constraint_residuals(q, C_SING))) < 1e-12


def test_disjoint_set():
    dsu = DisjointSet(6)
    dsu.union(0, 1)
    dsu.union(1, 2)
    dsu.union(4, 5)
    assert dsu.find(2) == dsu.find(0)
    assert dsu.find(3) != dsu.find(0)
    assert dsu.component_sizes() == [3, 2, 1]
    assert not dsu.union(2, 0)
    assert dsu.union(3, 5)
    assert dsu.component_sizes() == [3, 3]
