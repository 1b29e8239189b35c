"""
Plane-curve primitives.

Sampling, arc-length reparametrization, Frenet frames, finite-difference
curvature and polar conversion. Curves are stored as read-only numpy arrays;
the normal is always the counterclockwise quarter-turn of the unit tangent,
J(x, y) = (-y, x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.spatial import cKDTree

from .errors import (
    ArcLengthFidelity,
    DegenerateSegment,
    IndexOutOfRange,
    OriginHasNoAngle,
    TooFewPoints,
)

FIDELITY_TOL = 1e-3
UNIT_TOL = 1e-9


class Vec2(NamedTuple):
    x: float
    y: float


def rotate90(v) -> Vec2:
    """Counterclockwise quarter turn, (x, y) -> (-y, x)."""
    x, y = v
    return Vec2(-y, x)


def rotate90_array(v: np.ndarray) -> np.ndarray:
    """Vectorized :func:`rotate90` over the last axis of an (..., 2) array."""
    v = np.asarray(v, dtype=float)
    return np.stack([-v[..., 1], v[..., 0]], axis=-1)


def rotation_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def to_polar(p) -> tuple[float, float]:
    """Return ``(r, theta)`` with ``theta`` in (-pi, pi].

    Raises
    ------
    OriginHasNoAngle
        If ``p`` is the origin.
    """
    x, y = float(p[0]), float(p[1])
    if x == 0.0 and y == 0.0:
        raise OriginHasNoAngle("the origin has no polar angle")
    theta = math.atan2(y, x)
    if theta == -math.pi:
        theta = math.pi
    return math.hypot(x, y), theta


def from_polar(r: float, theta: float) -> Vec2:
    return Vec2(r * math.cos(theta), r * math.sin(theta))


def fd_weights(x: np.ndarray, x0: float, m: int) -> np.ndarray:
    """Fornberg finite-difference weights.

    Returns the weights ``w`` such that ``sum(w * f(x))`` approximates the
    ``m``-th derivative of ``f`` at ``x0`` on the (arbitrary) nodes ``x``.
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    c = np.zeros((n, m + 1))
    c1 = 1.0
    c4 = x[0] - x0
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = x[i] - x0
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, m]


@dataclass(frozen=True)
class CurveSample:
    s: float
    pos: Vec2
    tangent: Vec2
    normal: Vec2
    curvature: float


@dataclass(frozen=True, eq=False)
class ArcCurve:
    """Arc-length sampled plane curve with its Frenet frame.

    All arrays are read-only. ``s`` is the arc-length parameter of each
    sample; for closed curves the closing segment from the last sample back
    to the first is part of the curve but not repeated in the arrays.
    """

    s: np.ndarray
    pos: np.ndarray
    tangent: np.ndarray
    normal: np.ndarray
    curvature: np.ndarray
    closed: bool = False
    fidelity_tol: float | None = FIDELITY_TOL

    def __post_init__(self):
        for name in ("s", "pos", "tangent", "normal", "curvature"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        n = len(self.s)
        if n < 4:
            raise TooFewPoints(f"an ArcCurve needs at least 4 samples, got {n}")
        if self.pos.shape != (n, 2) or self.tangent.shape != (n, 2) or self.normal.shape != (n, 2):
            raise ValueError("pos/tangent/normal must have shape (len(s), 2)")
        if not np.all(np.isfinite(self.pos)):
            raise DegenerateSegment("non-finite sample positions")
        ds = np.diff(self.s)
        if np.any(ds <= 0):
            raise DegenerateSegment("arc length must be strictly increasing")
        if self.fidelity_tol is not None:
            chords = np.linalg.norm(np.diff(self.pos, axis=0), axis=1)
            rel = np.abs(chords - ds) / ds
            if rel.max() > self.fidelity_tol:
                raise ArcLengthFidelity(
                    f"chord/arc-length mismatch {rel.max():.3g} exceeds {self.fidelity_tol:g}"
                )

    def __len__(self) -> int:
        return len(self.s)

    def sample(self, i: int) -> CurveSample:
        if not -len(self) <= i < len(self):
            raise IndexOutOfRange(i)
        return CurveSample(
            float(self.s[i]),
            Vec2(*map(float, self.pos[i])),
            Vec2(*map(float, self.tangent[i])),
            Vec2(*map(float, self.normal[i])),
            float(self.curvature[i]),
        )

    @property
    def length(self) -> float:
        total = float(self.s[-1] - self.s[0])
        if self.closed:
            total += float(np.linalg.norm(self.pos[0] - self.pos[-1]))
        return total

    @property
    def spacing(self) -> float:
        """Mean sample spacing in arc length."""
        return float(np.mean(np.diff(self.s)))

    def speed(self) -> np.ndarray:
        """|d pos / ds| at each sample, before the tangent is normalized.

        Equals 1 up to discretization error for a genuine arc-length sampling.
        """
        period = self.length if self.closed else None
        return np.linalg.norm(_first_derivative(self.pos, self.s, self.closed, period), axis=1)

    def reversed(self) -> "ArcCurve":
        """Same trace with the opposite orientation (and hence opposite normal)."""
        return reparam_arclength(self.pos[::-1], closed=self.closed)

    def transformed(self, matrix, scale: float = 1.0) -> "ArcCurve":
        """Apply ``scale * matrix`` about the origin and re-sample."""
        pts = scale * (self.pos @ np.asarray(matrix, dtype=float).T)
        return reparam_arclength(pts, closed=self.closed)


def _chord_arclength(pos: np.ndarray) -> np.ndarray:
    seg = np.linalg.norm(np.diff(pos, axis=0), axis=1)
    return np.concatenate([[0.0], np.cumsum(seg)])


def _pad_closed(pos: np.ndarray, s: np.ndarray, k: int, period: float | None = None):
    # period defaults to the length of the closed polygon through ``pos``
    total = s[-1] + float(np.linalg.norm(pos[0] - pos[-1])) if period is None else period
    ext_pos = np.concatenate([pos[-k:], pos, pos[:k]])
    ext_s = np.concatenate([s[-k:] - total, s, s[:k] + total])
    return ext_pos, ext_s


def _lagrange_d1(values: np.ndarray, s: np.ndarray, start: np.ndarray, at: np.ndarray) -> np.ndarray:
    # derivative at s[at] of the quartic through the 5 samples from index start
    d = np.stack([s[start + j] - s[at] for j in range(5)], axis=1)
    out = np.zeros((len(at),) + values.shape[1:])
    for j in range(5):
        others = [m for m in range(5) if m != j]
        denom = np.prod([d[:, j] - d[:, m] for m in others], axis=0)
        numer = np.zeros(len(at))
        for k in others:
            numer += np.prod([-d[:, m] for m in others if m != k], axis=0)
        w = numer / denom
        out += w.reshape((-1,) + (1,) * (values.ndim - 1)) * values[start + j]
    return out


def _first_derivative(pos: np.ndarray, s: np.ndarray, closed: bool, period: float | None = None) -> np.ndarray:
    """Five-point (fourth-order) first derivative, one-sided near open ends.

    The tangent gets differentiated again downstream (TreadmillSled, Frenet
    checks), so its error must be both small and smooth along the curve.
    """
    if closed:
        ext_pos, ext_s = _pad_closed(pos, s, 2, period)
        idx = np.arange(2, len(s) + 2)
        return _lagrange_d1(ext_pos, ext_s, idx - 2, idx)
    n = len(s)
    if n < 5:
        return np.gradient(pos, s, axis=0, edge_order=2)
    idx = np.arange(n)
    return _lagrange_d1(pos, s, np.clip(idx - 2, 0, n - 5), idx)


def _second_derivative(pos: np.ndarray, s: np.ndarray, closed: bool) -> np.ndarray:
    if closed:
        ext_pos, ext_s = _pad_closed(pos, s, 1)
        return _second_derivative_interior(ext_pos, ext_s)
    out = np.empty_like(pos)
    out[1:-1] = _second_derivative_interior(pos, s)
    out[0] = _one_sided(pos, s, 0, 2)
    out[-1] = _one_sided(pos, s, len(s) - 1, 2)
    return out


def _second_derivative_interior(pos: np.ndarray, s: np.ndarray) -> np.ndarray:
    h1 = (s[1:-1] - s[:-2])[:, None]
    h2 = (s[2:] - s[1:-1])[:, None]
    return 2.0 * (
        pos[:-2] / (h1 * (h1 + h2))
        - pos[1:-1] / (h1 * h2)
        + pos[2:] / (h2 * (h1 + h2))
    )


def _one_sided(pos: np.ndarray, s: np.ndarray, i: int, m: int) -> np.ndarray:
    # 4-point one-sided stencil for the m-th derivative at an end
    idx = np.arange(4) if i == 0 else np.arange(len(s) - 4, len(s))
    w = fd_weights(s[idx], s[i], m)
    return w @ pos[idx]


def _frame(pos: np.ndarray, s: np.ndarray, closed: bool):
    d1 = _first_derivative(pos, s, closed)
    tangent = d1 / np.linalg.norm(d1, axis=1)[:, None]
    normal = rotate90_array(tangent)
    d2 = _second_derivative(pos, s, closed)
    curvature = np.einsum("ij,ij->i", d2, normal)
    return tangent, normal, curvature


def reparam_arclength(
    points: Sequence, closed: bool = False, fidelity_tol: float | None = FIDELITY_TOL
) -> ArcCurve:
    """Build an :class:`ArcCurve` from an ordered point list.

    Arc length is the cumulative chord length. Tangents come from five-point
    finite differences on the (possibly non-uniform) arc-length grid,
    renormalized to unit length; curvature is the three-point second
    difference projected on the normal (four-point one-sided at open ends).

    Parameters
    ----------
    points : sequence of (x, y)
        At least 4 points, no two consecutive ones equal.
    closed : bool
        Treat the last point as connected back to the first.

    Raises
    ------
    TooFewPoints, DegenerateSegment
    """
    pos = np.asarray(points, dtype=float)
    if pos.ndim != 2 or pos.shape[1] != 2:
        raise DegenerateSegment("points must be an (N, 2) array")
    if len(pos) < 4:
        raise TooFewPoints(f"need at least 4 points, got {len(pos)}")
    seg = np.linalg.norm(np.diff(pos, axis=0), axis=1)
    if np.any(seg == 0.0):
        bad = int(np.flatnonzero(seg == 0.0)[0])
        raise DegenerateSegment(f"repeated consecutive points at index {bad}")
    if closed and np.all(pos[0] == pos[-1]):
        raise DegenerateSegment("closed curves must not repeat the first point at the end")
    s = _chord_arclength(pos)
    tangent, normal, curvature = _frame(pos, s, closed)
    return ArcCurve(s, pos, tangent, normal, curvature, closed, fidelity_tol)


def curvature_fd(curve: ArcCurve, index: int) -> float:
    """Finite-difference curvature at one sample.

    Centered three-point second difference on interior samples (and on every
    sample of a closed curve, wrapping around); four-point one-sided stencils
    at the ends of an open curve. Second-order accurate in the spacing.
    """
    n = len(curve)
    if not 0 <= index < n:
        raise IndexOutOfRange(f"index {index} outside [0, {n})")
    pos, s = curve.pos, curve.s
    if curve.closed or 0 < index < n - 1:
        if curve.closed:
            ext_pos, ext_s = _pad_closed(pos, s, 1)
            j = index + 1
        else:
            ext_pos, ext_s = pos, s
            j = index
        d2 = _second_derivative_interior(ext_pos[j - 1:j + 2], ext_s[j - 1:j + 2])[0]
    else:
        d2 = _one_sided(pos, s, index, 2)
    return float(d2 @ curve.normal[index])


def sample_parametric(
    func: Callable[[np.ndarray], np.ndarray],
    t0: float,
    t1: float,
    h: float,
    oversample: int = 16,
    min_points: int = 4096,
) -> tuple[np.ndarray, np.ndarray]:
    """Sample a parametric curve at (nearly) uniform arc-length spacing ``h``.

    ``func`` maps an array of parameters to an (N, 2) array of points. The
    arc length is first tabulated on a fine parameter grid, then the
    parameter is interpolated smoothly at the target arc lengths and the
    curve is evaluated exactly there. ``t1 < t0`` traverses the curve
    backwards. Returns ``(t, points)``.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    coarse = np.linspace(t0, t1, min_points)
    rough = _chord_arclength(func(coarse))[-1]
    n_fine = max(min_points, int(oversample * rough / h) + 1)
    tf = np.linspace(t0, t1, n_fine)
    sf = _chord_arclength(func(tf))
    n_out = max(4, int(round(sf[-1] / h)) + 1)
    targets = np.linspace(0.0, sf[-1], n_out)
    t = CubicSpline(sf, tf)(targets)
    t[0], t[-1] = t0, t1
    return t, func(t)


def point_polyline_distance(points: np.ndarray, poly: np.ndarray, k: int = 4) -> np.ndarray:
    """Distance from each point to a dense polyline.

    Candidate segments are those adjacent to the ``k`` nearest polyline
    vertices, which is exact for well-sampled smooth curves.
    """
    points = np.asarray(points, dtype=float)
    poly = np.asarray(poly, dtype=float)
    k = min(k, len(poly))
    _, idx = cKDTree(poly).query(points, k=k)
    idx = np.atleast_2d(idx.T).T if k == 1 else idx
    best = np.full(len(points), np.inf)
    for col in range(idx.shape[1]):
        for off in (-1, 0):
            a_i = np.clip(idx[:, col] + off, 0, len(poly) - 2)
            a, b = poly[a_i], poly[a_i + 1]
            ab = b - a
            denom = np.einsum("ij,ij->i", ab, ab)
            lam = np.clip(np.einsum("ij,ij->i", points - a, ab) / denom, 0.0, 1.0)
            d = np.linalg.norm(points - (a + lam[:, None] * ab), axis=1)
            best = np.minimum(best, d)
    return best


def hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    """Symmetric Hausdorff distance between two dense polylines."""
    return float(max(point_polyline_distance(a, b).max(), point_polyline_distance(b, a).max()))


def best_rotation(source: np.ndarray, target: np.ndarray) -> float:
    """Angle of the rotation about the origin that best maps ``source`` onto ``target``.

    Least squares over corresponding points.
    """
    source = np.asarray(source, dtype=float)
    target = np.asarray(target, dtype=float)
    dot = np.sum(source * target)
    cross = np.sum(source[:, 0] * target[:, 1] - source[:, 1] * target[:, 0])
    return math.atan2(cross, dot)
