"""
TreadmillSled transform and its inverse.

For a unit-speed curve alpha with unit normal n = J(alpha') the TreadmillSled
is gamma(s) = -(<alpha, alpha'>, <alpha, n>). It only sees rotation-invariant
dot products, so rotated copies of a curve share one TreadmillSled, and
|gamma| = |alpha| pointwise.

A regular curve gamma(t) = (xi1, xi2) is a TreadmillSled iff
xi2' = -f xi1 for some continuous f with xi2 f - xi1' > 0; the curve is then
recovered, up to a rotation, as alpha = -Rot(G) gamma with G' = f.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson, cumulative_trapezoid

from .errors import CrossesVerticalAxis, DegenerateSegment, NotATreadmillSled, TooFewPoints
from .geometry import ArcCurve, _first_derivative, reparam_arclength

AXIS_TOL = 1e-8
POSITIVITY_TOL = -1e-9
UNIFORM_RTOL = 1e-6


@dataclass(frozen=True, eq=False)
class TmsCurve:
    """Sampled TreadmillSled path: parameters ``params`` and points ``(xi1, xi2)``."""

    params: np.ndarray
    points: np.ndarray

    def __post_init__(self):
        t = np.array(self.params, dtype=float)
        p = np.array(self.points, dtype=float)
        if p.ndim != 2 or p.shape != (len(t), 2):
            raise DegenerateSegment("points must have shape (len(params), 2)")
        if len(t) < 4:
            raise TooFewPoints(f"need at least 4 samples, got {len(t)}")
        if np.any(np.diff(t) <= 0):
            raise DegenerateSegment("params must be strictly increasing")
        t.flags.writeable = False
        p.flags.writeable = False
        object.__setattr__(self, "params", t)
        object.__setattr__(self, "points", p)

    def __len__(self) -> int:
        return len(self.params)

    @property
    def xi1(self) -> np.ndarray:
        return self.points[:, 0]

    @property
    def xi2(self) -> np.ndarray:
        return self.points[:, 1]


def tms_forward(curve: ArcCurve) -> TmsCurve:
    radial = np.einsum("ij,ij->i", curve.pos, curve.tangent)
    lateral = np.einsum("ij,ij->i", curve.pos, curve.normal)
    return TmsCurve(curve.s, -np.column_stack([radial, lateral]))


def _cumulative_integral(f: np.ndarray, t: np.ndarray) -> np.ndarray:
    dt = np.diff(t)
    if np.ptp(dt) <= UNIFORM_RTOL * dt.mean():
        return cumulative_simpson(f, dx=float(dt.mean()), initial=0.0)
    return cumulative_trapezoid(f, t, initial=0.0)


def _rotation_function(gamma: TmsCurve) -> np.ndarray:
    """f = -xi2'/xi1 after validating the TreadmillSled conditions."""
    xi1, xi2 = gamma.xi1, gamma.xi2
    scale = np.linalg.norm(gamma.points, axis=1).max()
    if np.any(np.abs(xi1) < AXIS_TOL * scale) or not (np.all(xi1 > 0) or np.all(xi1 < 0)):
        raise CrossesVerticalAxis("xi1 vanishes on the sampled interval")
    d = _first_derivative(gamma.points, gamma.params, closed=False)
    f = -d[:, 1] / xi1
    positivity = xi2 * f - d[:, 0]
    if np.any(positivity <= POSITIVITY_TOL):
        i = int(np.argmin(positivity))
        raise NotATreadmillSled(
            f"xi2 f - xi1' = {positivity[i]:.3g} <= 0 at t = {gamma.params[i]:.6g}"
        )
    return f


def rotation_angle(gamma: TmsCurve, g0: float = 0.0) -> np.ndarray:
    """The antiderivative G of f with G(t0) = g0, i.e. the tangent angle of the recovered curve."""
    f = _rotation_function(gamma)
    return g0 + _cumulative_integral(f, gamma.params)


def total_rotation(gamma: TmsCurve) -> float:
    """Total turning of the recovered curve's tangent over the sampled interval."""
    G = rotation_angle(gamma)
    return float(G[-1] - G[0])


def reconstruct_points(gamma: TmsCurve, g0: float = 0.0) -> np.ndarray:
    """alpha = -Rot(G) gamma at the TreadmillSled's own parameters."""
    G = rotation_angle(gamma, g0)
    c, s = np.cos(G), np.sin(G)
    xi1, xi2 = gamma.xi1, gamma.xi2
    return -np.column_stack([c * xi1 - s * xi2, s * xi1 + c * xi2])


def tms_inverse(gamma: TmsCurve, g0: float = 0.0) -> ArcCurve:
    """Recover the curve whose TreadmillSled is ``gamma``, re-sampled by arc length.

    ``g0`` is the free integration constant; changing it rotates the result
    about the origin.

    Raises
    ------
    CrossesVerticalAxis
        If xi1 vanishes (or changes sign) on the sampled interval.
    NotATreadmillSled
        If xi2 f - xi1' is not positive somewhere.
    """
    return reparam_arclength(reconstruct_points(gamma, g0))


def tms_inverse_point(point, n: int = 1024) -> ArcCurve:
    """Inverse of a constant TreadmillSled (0, r): the circle of radius |r| about the origin."""
    x0, r = float(point[0]), float(point[1])
    if r == 0.0 or abs(x0) > AXIS_TOL * abs(r):
        raise NotATreadmillSled(f"a constant TreadmillSled must be (0, r) with r != 0, got {tuple(point)}")
    theta = np.sign(r) * np.linspace(0.0, 2 * np.pi, n, endpoint=False)
    pts = -np.column_stack([-np.sin(theta) * r, np.cos(theta) * r])
    return reparam_arclength(pts, closed=True)


def tms_frenet_residual(curve: ArcCurve) -> float:
    """Max over samples of |xi1' + 1 - kappa xi2| + |xi2' + kappa xi1|.

    Near zero for any genuinely arc-length parametrized curve; derivatives
    are taken by finite differences in the curve's own ``s``.
    """
    gamma = tms_forward(curve)
    d = _first_derivative(gamma.points, curve.s, curve.closed, curve.length)
    k = curve.curvature
    xi1, xi2 = gamma.xi1, gamma.xi2
    res = np.abs(d[:, 0] + 1.0 - k * xi2) + np.abs(d[:, 1] + k * xi1)
    return float(res.max())
