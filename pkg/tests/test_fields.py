import numpy as np
import pytest

from helmbie.fields import (
    FarFieldPattern,
    FieldEvaluator,
    double_layer_potential,
    far_field_constant,
    far_field_linf_diff,
    point_source_far_field,
    single_layer_potential,
)
from helmbie.formulations import PointSource
from helmbie.geometry import grid, kite

KITE = kite()
K = 8.0
N = 128


def _interior_source_data(k=K, n=N, y0=(0.1, 0.2)):
    src = PointSource(y0)
    t = grid(n).nodes
    xb = KITE.point(t)
    d1 = KITE.d1(t)
    m = np.stack([d1[:, 1], -d1[:, 0]], axis=-1)
    a = src.value(k, xb)
    phi = np.sum(src.gradient(k, xb) * m, axis=-1)
    return src, a, phi


@pytest.fixture(scope="module")
def green_evaluator():
    src, a, phi = _interior_source_data()
    return src, FieldEvaluator(KITE, [("sl", K, -phi), ("dl", K, a)])


def _ring(radius, count=10, center=(0.0, 0.0)):
    ang = np.linspace(0, 2 * np.pi, count, endpoint=False)
    return np.stack([center[0] + radius * np.cos(ang),
                     center[1] + radius * np.sin(ang)], axis=-1)


def test_representation_reproduces_source(green_evaluator):
    src, ev = green_evaluator
    pts = _ring(3.0)
    assert np.max(np.abs(ev(pts) - src.value(K, pts))) <= 1e-10


def test_extinction_inside(green_evaluator):
    _, ev = green_evaluator
    assert np.max(np.abs(ev(_ring(0.35)))) <= 1e-10


def test_zero_densities_give_zero_field():
    zeros = np.zeros(2 * N, dtype=complex)
    ev = FieldEvaluator(KITE, [("sl", K, zeros), ("dl", K, zeros)])
    assert np.max(np.abs(ev(_ring(3.0)))) == 0.0
    assert np.max(np.abs(ev.far_field(np.linspace(0, 6, 7)).values)) == 0.0


def test_field_convergence_is_superalgebraic(green_evaluator):
    src, _ = green_evaluator
    pts = _ring(4.5)  # outside the N = 16 distance guard
    errs = []
    for n in (16, 32, 64):
        _, a, phi = _interior_source_data(n=n)
        ev = FieldEvaluator(KITE, [("sl", K, -phi), ("dl", K, a)])
        errs.append(np.max(np.abs(ev(pts) - src.value(K, pts))))
    assert errs[1] <= errs[0] / 10.0
    assert errs[2] <= errs[1] / 10.0


def test_near_boundary_guard(green_evaluator):
    _, ev = green_evaluator
    close = KITE.point(np.array([1.0])) + 1e-4
    with pytest.raises(ValueError, match="guard"):
        ev(close)
    assert ev.min_distance == pytest.approx(
        5 * np.pi / N * KITE.max_speed(), rel=1e-12
    )


def test_radiation_limit_pins_far_field_constant(green_evaluator):
    """sqrt(R) e^{-ikR} u(R x^) -> u_inf(x^); two-step Richardson in 1/R."""
    _, ev = green_evaluator
    angle = 0.3
    xhat = np.array([np.cos(angle), np.sin(angle)])
    vals = []
    for R in (50.0, 100.0, 200.0):
        u = ev(np.array([R * xhat]))[0]
        vals.append(np.sqrt(R) * np.exp(-1j * K * R) * u)
    v1, v2, v3 = vals
    extrap = (8.0 * v3 - 6.0 * v2 + v1) / 3.0
    ff = ev.far_field(np.array([angle])).values[0]
    assert abs(extrap - ff) <= 1e-8


def test_far_field_of_interior_source_is_plane_wave_factor(green_evaluator):
    src, ev = green_evaluator
    angles = np.linspace(0, 2 * np.pi, 360, endpoint=False)
    got = ev.far_field(angles)
    target = point_source_far_field(K, src.location, angles)
    assert np.max(np.abs(got.values - target)) <= 1e-10


def test_far_field_constant_value():
    assert far_field_constant(2.0) == pytest.approx(
        np.exp(0.25j * np.pi) / np.sqrt(16 * np.pi), abs=1e-16
    )


def test_far_field_linf_metric():
    ang = np.linspace(0, 2 * np.pi, 8, endpoint=False)
    p = FarFieldPattern(ang, np.ones(8))
    q = FarFieldPattern(ang, np.ones(8) + 1e-3 * 1j)
    assert far_field_linf_diff(p, q) == pytest.approx(1e-3, rel=1e-12)
    with pytest.raises(ValueError):
        far_field_linf_diff(p, FarFieldPattern(ang + 0.1, np.ones(8)))


def test_far_field_pattern_validation():
    with pytest.raises(ValueError):
        FarFieldPattern(np.array([]), np.array([]))
    p = FarFieldPattern(np.array([0.0, np.pi / 2]), np.array([1.0, 2.0]))
    assert np.allclose(p.directions, [[1, 0], [0, 1]], atol=1e-15)


def test_evaluator_validation():
    zeros = np.zeros(2 * N, dtype=complex)
    with pytest.raises(ValueError):
        FieldEvaluator(KITE, [])
    with pytest.raises(ValueError):
        FieldEvaluator(KITE, [("sl", K, zeros), ("dl", K, zeros[:-2])])
    with pytest.raises(ValueError):
        FieldEvaluator(KITE, [("curl", K, zeros)])(_ring(3.0))
    mixed = FieldEvaluator(KITE, [("sl", 1.0, zeros), ("sl", 2.0, zeros)])
    with pytest.raises(ValueError):
        mixed.far_field(np.array([0.0]))


def test_potentials_match_evaluator_sum():
    rng = np.random.default_rng(0)
    dens1 = rng.standard_normal(2 * N) + 1j * rng.standard_normal(2 * N)
    dens2 = rng.standard_normal(2 * N) + 1j * rng.standard_normal(2 * N)
    pts = _ring(4.0, count=5)
    ev = FieldEvaluator(KITE, [("sl", K, dens1), ("dl", K, dens2)])
    direct = single_layer_potential(KITE, K, dens1, pts) \
        + double_layer_potential(KITE, K, dens2, pts)
    assert np.max(np.abs(ev(pts) - direct)) <= 1e-14
