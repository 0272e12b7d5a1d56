"""Near-field evaluation through the layer potentials and far-field patterns.

Off the boundary both potentials have smooth periodic parameterized
integrands, so the plain trapezoid rule is spectrally accurate; evaluation
points closer to the curve than 5 h max|x'| (h = pi/N) are rejected.

Far-field normalization: u(r x^) ~ e^{ikr}/sqrt(r) u_inf(x^) with

    u_inf = e^{i pi/4} / sqrt(8 pi k) *
            int [ e^{-ik x^.x(t)} phi(t)                       (SL term)
                  - ik (x^.n(t)) e^{-ik x^.x(t)} |x'(t)| g(t) ] dt   (DL term)

The phase constant is pinned by the radiation-limit test
sqrt(R) e^{-ikR} u(R x^) -> u_inf(x^).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import specfun
from .geometry import ParametricCurve, grid

__all__ = [
    "FarFieldPattern",
    "FieldEvaluator",
    "far_field_constant",
    "single_layer_potential",
    "double_layer_potential",
    "single_layer_far_field",
    "double_layer_far_field",
    "point_source_far_field",
    "far_field_linf_diff",
]


def far_field_constant(k: float) -> complex:
    return np.exp(0.25j * np.pi) / np.sqrt(8.0 * np.pi * k)


def _grid_geometry(curve: ParametricCurve, n_density: int):
    if n_density % 2 != 0:
        raise ValueError("density must have an even number of nodal values")
    N = n_density // 2
    nodes = grid(N).nodes
    xb = curve.point(nodes)
    d1 = curve.d1(nodes)
    m = np.stack([d1[:, 1], -d1[:, 0]], axis=-1)  # unnormalized outward normal
    return N, nodes, xb, m


def single_layer_potential(curve, k, density, points):
    """Trapezoid evaluation of int Phi_k(p - x(t)) phi(t) dt off the curve."""
    density = np.asarray(density, dtype=complex)
    N, _, xb, _ = _grid_geometry(curve, density.size)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    diff = pts[:, None, :] - xb[None, :, :]
    r = np.linalg.norm(diff, axis=-1)
    kern = 0.25j * specfun.hankel1(0, k * r)
    return (np.pi / N) * (kern @ density)


def double_layer_potential(curve, k, density, points):
    """Trapezoid evaluation of int dPhi_k/dn(t) |x'(t)| g(t) dt off the curve."""
    density = np.asarray(density, dtype=complex)
    N, _, xb, m = _grid_geometry(curve, density.size)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    diff = pts[:, None, :] - xb[None, :, :]
    r = np.linalg.norm(diff, axis=-1)
    dot = diff[..., 0] * m[None, :, 0] + diff[..., 1] * m[None, :, 1]
    kern = 0.25j * k * specfun.hankel1(1, k * r) * dot / r
    return (np.pi / N) * (kern @ density)


def _directions(angles):
    angles = np.atleast_1d(np.asarray(angles, dtype=float))
    if angles.size < 1:
        raise ValueError("need at least one direction")
    return np.stack([np.cos(angles), np.sin(angles)], axis=-1)


def single_layer_far_field(curve, k, density, angles):
    density = np.asarray(density, dtype=complex)
    N, _, xb, _ = _grid_geometry(curve, density.size)
    xhat = _directions(angles)
    phase = np.exp(-1j * k * (xhat @ xb.T))
    return far_field_constant(k) * (np.pi / N) * (phase @ density)


def double_layer_far_field(curve, k, density, angles):
    density = np.asarray(density, dtype=complex)
    N, _, xb, m = _grid_geometry(curve, density.size)
    xhat = _directions(angles)
    phase = np.exp(-1j * k * (xhat @ xb.T))
    dot = xhat @ m.T
    return far_field_constant(k) * (np.pi / N) * ((-1j * k * dot * phase) @ density)


def point_source_far_field(k, location, angles):
    """Far field of Phi_k(. - y0): const * e^{-ik x^.y0}."""
    xhat = _directions(angles)
    y0 = np.asarray(location, dtype=float)
    return far_field_constant(k) * np.exp(-1j * k * (xhat @ y0))


@dataclass(frozen=True)
class FarFieldPattern:
    """Angular amplitude sampled at unit directions given by angles."""

    angles: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        angles = np.atleast_1d(np.asarray(self.angles, dtype=float))
        values = np.atleast_1d(np.asarray(self.values, dtype=complex))
        if angles.size < 1 or angles.size != values.size:
            raise ValueError("angles and values must match and be nonempty")
        object.__setattr__(self, "angles", angles)
        object.__setattr__(self, "values", values)

    @property
    def directions(self):
        return _directions(self.angles)


def far_field_linf_diff(p: FarFieldPattern, q: FarFieldPattern) -> float:
    if p.angles.size != q.angles.size or not np.allclose(p.angles, q.angles):
        raise ValueError("patterns sampled at different directions")
    return float(np.max(np.abs(p.values - q.values)))


class FieldEvaluator:
    """Sum of layer potentials with fixed densities on one curve.

    ``terms`` is a list of ("sl" | "dl", k, nodal density).  Evaluation
    enforces the 5 h max|x'| distance guard; far fields require all terms to
    share one wavenumber.
    """

    def __init__(self, curve: ParametricCurve, terms, guard: bool = True):
        if not terms:
            raise ValueError("need at least one potential term")
        sizes = {len(np.asarray(d)) for _, _, d in terms}
        if len(sizes) != 1:
            raise ValueError("all densities must share one grid")
        self.curve = curve
        self.terms = [(kind, k, np.asarray(d, dtype=complex)) for kind, k, d in terms]
        self.N = sizes.pop() // 2
        self.guard = guard
        self._max_speed = curve.max_speed()

    @property
    def min_distance(self) -> float:
        return 5.0 * (np.pi / self.N) * self._max_speed

    def __call__(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if self.guard:
            dist = self.curve.distance(pts)
            if np.any(dist <= self.min_distance):
                worst = float(dist.min())
                raise ValueError(
                    f"evaluation point at distance {worst:.3e} from the curve; "
                    f"the quadrature guard requires > {self.min_distance:.3e}"
                )
        out = np.zeros(pts.shape[0], dtype=complex)
        for kind, k, density in self.terms:
            if kind == "sl":
                out += single_layer_potential(self.curve, k, density, pts)
            elif kind == "dl":
                out += double_layer_potential(self.curve, k, density, pts)
            else:
                raise ValueError(f"unknown potential kind {kind!r}")
        return out

    def far_field(self, angles) -> FarFieldPattern:
        ks = {k for _, k, _ in self.terms}
        if len(ks) != 1:
            raise ValueError("far field undefined for mixed wavenumbers")
        k = ks.pop()
        angles = np.atleast_1d(np.asarray(angles, dtype=float))
        vals = np.zeros(angles.size, dtype=complex)
        for kind, _, density in self.terms:
            if kind == "sl":
                vals += single_layer_far_field(self.curve, k, density, angles)
            else:
                vals += double_layer_far_field(self.curve, k, density, angles)
        return FarFieldPattern(angles, vals)
