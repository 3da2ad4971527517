#!/usr/bin/env python3
"""
Tests for power sums, regimes, tangent frames and projected Hessians
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest
from numpy.testing import assert_allclose

# Add project to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from powersurf.core.errors import OffSurfaceError, SingularPointError
from powersurf.core.surface import (
    C_EDGE,
    C_SING,
    Regime,
    SurfaceSpec,
    as_point,
    classify_regime,
    constraint_jacobian,
    constraint_residuals,
    distinct_value_count,
    fit_multipliers,
    is_singular_surface_point,
    lagrangian_hessian_diagonal,
    on_surface,
    p3_critical_levels,
    power_sum,
    projected_hessian,
    projected_hessian_eigenvalues,
    tangent_frame,
)
from powersurf.utils.sampling import sample_surface_points

SQRT2 = math.sqrt(2.0)
TYPE1_ZERO = as_point((0.5, 0.5, -0.5, -0.5, 0.0))
TYPE2_ZERO = as_point((0.0, 0.0, 0.0, 1 / SQRT2, -1 / SQRT2))
SINGULAR_NEG = as_point([2 / math.sqrt(30)] * 3 + [-3 / math.sqrt(30)] * 2)


def test_boundary_constants():
    assert C_SING == pytest.approx(0.18257418583505536, abs=1e-16)
    assert C_EDGE == pytest.approx(0.67082039324993690, abs=1e-16)


@pytest.mark.parametrize("c, regime", [
    (0.0, Regime.SMOOTH_CONNECTED),
    (0.1, Regime.SMOOTH_CONNECTED),
    (-0.1, Regime.SMOOTH_CONNECTED),
    (C_SING, Regime.SINGULAR_SURFACE),
    (-C_SING, Regime.SINGULAR_SURFACE),
    (0.4, Regime.SMOOTH_FIVE_SPHERES),
    (-0.4, Regime.SMOOTH_FIVE_SPHERES),
    (C_EDGE, Regime.FIVE_POINTS),
    (-C_EDGE, Regime.FIVE_POINTS),
    (0.7, Regime.EMPTY),
    (-0.7, Regime.EMPTY),
])
def test_classify_regime_table(c, regime):
    assert classify_regime(SurfaceSpec(c)) == regime


def test_classify_regime_uses_tight_boundary_tolerance():
    assert classify_regime(SurfaceSpec(C_SING + 5e-13)) == Regime.SINGULAR_SURFACE
    assert classify_regime(SurfaceSpec(C_SING + 1e-9)) == Regime.SMOOTH_FIVE_SPHERES
    assert classify_regime(SurfaceSpec(C_SING - 1e-9)) == Regime.SMOOTH_CONNECTED
    assert classify_regime(SurfaceSpec(C_EDGE + 1e-9)) == Regime.EMPTY


def test_surface_spec_rejects_bad_values():
    with pytest.raises(ValueError):
        SurfaceSpec(float("nan"))
    with pytest.raises(ValueError):
        SurfaceSpec(0.0, tol_surface=0.0)


def test_as_point_is_read_only_and_validated():
    p = as_point([1, 2, 3, 4, 5])
    assert p.dtype == np.float64
    with pytest.raises(ValueError):
        p[0] = 7.0
    with pytest.raises(ValueError):
        as_point([1, 2, 3])
    with pytest.raises(ValueError):
        as_point([1, 2, 3, 4, float("inf")])


def test_power_sums():
    p = as_point((1, -1, 2, 0, 0))
    assert power_sum(p, 1) == 2.0
    assert power_sum(p, 2) == 6.0
    assert power_sum(p, 3) == 8.0
    assert power_sum(p, 4) == 18.0
    with pytest.raises(ValueError):
        power_sum(p, 5)


def test_constraint_residuals_and_on_surface():
    assert_allclose(constraint_residuals(TYPE1_ZERO, 0.0), 0.0, atol=1e-15)
    assert on_surface(TYPE2_ZERO, SurfaceSpec(0.0))
    assert not on_surface(TYPE2_ZERO, SurfaceSpec(0.1))
    assert_allclose(constraint_residuals(as_point((1, 0, 0, 0, 0)), 0.0), [1.0, 0.0, 1.0])


def test_distinct_value_count():
    assert distinct_value_count(TYPE1_ZERO) == 3
    assert distinct_value_count(SINGULAR_NEG) == 2
    assert distinct_value_count(as_point((0.1, 0.1 + 1e-10, 0.3, -0.2, -0.3))) == 4


def test_distinct_value_count_ignores_coordinate_order():
    rng = np.random.default_rng(0)
    for p, expected in ((TYPE1_ZERO, 3), (SINGULAR_NEG, 2), (as_point((0.4, -0.1, 0.3, -0.2, -0.4)), 5)):
        for _ in range(20):
            assert distinct_value_count(rng.permutation(p)) == expected


def test_singular_point_detection():
    spec = SurfaceSpec(-C_SING)
    assert on_surface(SINGULAR_NEG, spec)
    assert is_singular_surface_point(SINGULAR_NEG, spec)
    assert not is_singular_surface_point(TYPE1_ZERO, SurfaceSpec(0.0))
    with pytest.raises(OffSurfaceError):
        is_singular_surface_point(SINGULAR_NEG, SurfaceSpec(0.0))


def test_tangent_frame_is_orthonormal_null_space():
    frame = tangent_frame(TYPE1_ZERO, SurfaceSpec(0.0))
    b = frame.basis
    assert b.shape == (2, 5)
    assert_allclose(b @ b.T, np.eye(2), atol=1e-12)
    assert_allclose(constraint_jacobian(TYPE1_ZERO) @ b.T, 0.0, atol=1e-12)


@pytest.mark.parametrize("c", [0.0, 0.1, -0.3, 0.5])
def test_tangent_frames_at_sampled_points(c):
    spec = SurfaceSpec(c)
    for p in sample_surface_points(spec, 1000, rng=11):
        b = tangent_frame(p, spec).basis
        assert_allclose(np.linalg.norm(b, axis=1), 1.0, atol=1e-12)
        assert abs(b[0] @ b[1]) < 1e-12
        assert np.linalg.norm(constraint_jacobian(p) @ b.T) < 1e-10


def test_tangent_frame_rejects_singular_points():
    with pytest.raises(SingularPointError):
        tangent_frame(SINGULAR_NEG, SurfaceSpec(-C_SING))


def test_fit_multipliers_recovers_vieta_values():
    assert_allclose(fit_multipliers(TYPE1_ZERO), (0.0, 0.5, 0.0), atol=1e-14)
    assert_allclose(fit_multipliers(TYPE2_ZERO), (0.0, 1.0, 0.0), atol=1e-14)


def test_projected_hessian_at_zero_level():
    spec = SurfaceSpec(0.0)
    minimum = projected_hessian_eigenvalues(TYPE1_ZERO, (0.0, 0.5, 0.0), tangent_frame(TYPE1_ZERO, spec))
    maximum = projected_hessian_eigenvalues(TYPE2_ZERO, (0.0, 1.0, 0.0), tangent_frame(TYPE2_ZERO, spec))
    assert_allclose(minimum, [2.0, 2.0], atol=1e-12)
    assert_allclose(maximum, [-2.0, -2.0], atol=1e-12)


def test_projected_hessian_spectrum_is_frame_invariant():
    # type-1 saddle of the zero level
    t = 1 / math.sqrt(10)
    s = math.sqrt(1 - 5 * t * t)
    a, b, c = (t + s) / 2, (t - s) / 2, -2 * t
    p = as_point((a, a, b, b, c))
    lam = fit_multipliers(p)
    frame = tangent_frame(p, SurfaceSpec(0.0))
    reference = projected_hessian_eigenvalues(p, lam, frame)
    assert reference[0] < 0 < reference[1]
    for angle in (0.3, 1.1, 2.9):
        rotated = frame.rotated(angle)
        assert_allclose(projected_hessian_eigenvalues(p, lam, rotated), reference, atol=1e-12)
        h = projected_hessian(p, lam, rotated)
        assert_allclose(h, h.T, atol=0.0)


def test_lagrangian_hessian_diagonal_matches_finite_differences():
    rng = np.random.default_rng(11)
    h = 1e-6
    for _ in range(100):
        x = rng.standard_normal(5)
        lam = tuple(rng.standard_normal(3))

        def grad(y):
            return 4 * y ** 3 - 3 * lam[2] * y ** 2 - 2 * lam[1] * y - lam[0]

        fd = (grad(x + h) - grad(x - h)) / (2 * h)
        exact = lagrangian_hessian_diagonal(x, lam)
        assert np.max(np.abs(exact - fd)) / max(1.0, np.max(np.abs(exact))) < 1e-5


def test_p3_critical_levels_are_the_regime_boundaries():
    levels = p3_critical_levels()
    assert len(levels) == 4
    for pattern, values, c_value, count in levels:
        p = as_point([v for v, k in zip(values, pattern) for _ in range(k)])
        assert_allclose(constraint_residuals(p, c_value)[:2], 0.0, atol=1e-15)
        assert_allclose(power_sum(p, 3), c_value, atol=1e-15)
        expected = C_EDGE if pattern == (4, 1) else C_SING
        assert abs(c_value) == pytest.approx(expected, abs=1e-15)
        assert count == (5 if pattern == (4, 1) else 10)
