"""
Autonomous systems governing the TreadmillSleds of ramps for F(r) = -m/r.

Three vector fields share trajectory sets (they differ by positive factors
off the origin):

* ``GENERAL``   -- the TreadmillSled equations in arc length, any v;
* ``LINEAR_V1`` -- phi1' = -mu phi1 + phi2, phi2' = -phi1 - mu phi2 (v = 1);
* ``QUADRATIC`` -- the homogeneous quadratic system used for v != 1.

Also: half-line solutions, the polar closed form of the quadratic
system's trajectories, a fixed-step RK4 integrator and phase portraits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import OriginSingular, PhiOutOfDomain, StepIntoSingularity, VEqualsOne
from .ramp_law import RampConfig

SINGULAR_RADIUS = 1e-10
PHI_CLAMP = 1e-12


class System(Enum):
    GENERAL = "general"
    LINEAR_V1 = "linear_v1"
    QUADRATIC = "quadratic"


@dataclass(frozen=True)
class PhaseState:
    phi1: float
    phi2: float

    def __iter__(self):
        yield self.phi1
        yield self.phi2


@dataclass(frozen=True, eq=False)
class PhaseTrajectory:
    """An integrated trajectory; ``t`` is strictly increasing, ``states`` has shape (N, 2)."""

    system: System
    t: np.ndarray
    states: np.ndarray
    cfg: RampConfig
    h: float
    stop_reason: str = "steps"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("t", "states"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if len(self.t) > 1 and np.any(np.diff(self.t) <= 0):
            raise ValueError("trajectory times must be strictly increasing")

    def __len__(self) -> int:
        return len(self.t)

    def state(self, i: int) -> PhaseState:
        return PhaseState(*map(float, self.states[i]))


@dataclass(frozen=True)
class HalfLineSolution:
    """The ray ``sign * g * a`` (g > 0) of the quadratic system."""

    a: tuple[float, float]
    r0: float
    sign: int

    @property
    def direction(self) -> np.ndarray:
        a = self.sign * np.asarray(self.a)
        return a / np.linalg.norm(a)


@dataclass(frozen=True)
class PolarSolutionParams:
    A: float
    B: float
    domain: tuple[float, float]


class Equilibria(Enum):
    AXIS_FAMILY = "the xi2-axis {(0, a): a != 0}"
    DEGENERATE_ORIGIN = "the origin (degenerate) of the quadratic system"


def _require_v_ne_1(cfg: RampConfig):
    if cfg.v == 1.0:
        raise VEqualsOne("this construction needs v != 1")


def vf_general(state, cfg: RampConfig) -> PhaseState:
    x1, x2 = map(float, state)
    rr = x1 * x1 + x2 * x2
    if rr == 0.0:
        raise OriginSingular("the TreadmillSled system is singular at the origin")
    k = (x1 + cfg.mu * x2) / (cfg.v**2 * cfg.mu * rr)
    return PhaseState(-1.0 + k * x2, -k * x1)


def vf_v1(state, mu: float) -> PhaseState:
    p1, p2 = map(float, state)
    return PhaseState(-mu * p1 + p2, -p1 - mu * p2)


def solve_v1_closed(c1: float, c2: float, mu: float, t):
    """Closed-form solution of the linear v = 1 system with state (c1, c2) at t = 0.

    Returns a :class:`PhaseState` for scalar ``t`` and an (N, 2) array otherwise.
    """
    t_arr = np.asarray(t, dtype=float)
    decay = np.exp(-mu * t_arr)
    c, s = np.cos(t_arr), np.sin(t_arr)
    p1 = decay * (c1 * c + c2 * s)
    p2 = decay * (c2 * c - c1 * s)
    if t_arr.ndim == 0:
        return PhaseState(float(p1), float(p2))
    return np.column_stack([p1, p2])


def vf_quadratic(state, cfg: RampConfig) -> PhaseState:
    _require_v_ne_1(cfg)
    p1, p2 = map(float, state)
    mu, v2 = cfg.mu, cfg.v**2
    return PhaseState(
        -mu * v2 * p1 * p1 + mu * (1.0 - v2) * p2 * p2 + p1 * p2,
        -p1 * p1 - mu * p1 * p2,
    )


def _scalar_field(system: System, cfg: RampConfig):
    """Right-hand side on plain floats, for the integrator's inner loop."""
    mu, v2 = cfg.mu, cfg.v**2
    if system is System.GENERAL:
        def rhs(x1, x2):
            k = (x1 + mu * x2) / (v2 * mu * (x1 * x1 + x2 * x2))
            return -1.0 + k * x2, -k * x1
    elif system is System.LINEAR_V1:
        def rhs(p1, p2):
            return -mu * p1 + p2, -p1 - mu * p2
    else:
        _require_v_ne_1(cfg)
        c = mu * (1.0 - v2)

        def rhs(p1, p2):
            return -mu * v2 * p1 * p1 + c * p2 * p2 + p1 * p2, -p1 * p1 - mu * p1 * p2
    return rhs


def equilibria(cfg: RampConfig, system: System = System.GENERAL):
    """Critical points of the chosen system.

    ``GENERAL``: the whole axis family when v = 1, none otherwise.
    ``QUADRATIC``: the degenerate origin. ``LINEAR_V1``: the origin.
    """
    if system is System.GENERAL:
        return [Equilibria.AXIS_FAMILY] if cfg.v == 1.0 else []
    if system is System.QUADRATIC:
        _require_v_ne_1(cfg)
        return [Equilibria.DEGENERATE_ORIGIN]
    return [PhaseState(0.0, 0.0)]


def halfline_solutions(cfg: RampConfig) -> tuple[HalfLineSolution, HalfLineSolution]:
    """The two straight TreadmillSleds +-(e^t / (mu v^2)) (-1, r0), r0 = 1 / (mu (1 - v^2))."""
    _require_v_ne_1(cfg)
    r0 = 1.0 / (cfg.mu * (1.0 - cfg.v**2))
    k = 1.0 / (cfg.mu * cfg.v**2)
    a = (-k, k * r0)
    return HalfLineSolution(a, r0, 1), HalfLineSolution(a, r0, -1)


def polar_params(cfg: RampConfig) -> PolarSolutionParams:
    """A = 1 + B^2, B = mu (v^2 - 1), and the angular domain where cos(phi) + B sin(phi) > 0.

    The domain is (arctan B - pi/2, arctan B + pi/2); for v > 1 this is
    (-arctan(1/B), -arctan(1/B) + pi).
    """
    _require_v_ne_1(cfg)
    B = cfg.mu * (cfg.v**2 - 1.0)
    beta = math.atan(B)
    return PolarSolutionParams(1.0 + B * B, B, (beta - math.pi / 2, beta + math.pi / 2))


def _clamp_phi(phi, params: PolarSolutionParams):
    lo, hi = params.domain
    phi = np.asarray(phi, dtype=float)
    if np.any((phi < lo) | (phi > hi)) or np.any(~np.isfinite(phi)):
        raise PhiOutOfDomain(f"phi outside the domain ({lo:.15g}, {hi:.15g})")
    return np.clip(phi, lo + PHI_CLAMP, hi - PHI_CLAMP)


def polar_log_radius(phi, cfg: RampConfig):
    """log r(phi) for the trajectory through (r, phi) = (1, 0), computed without overflow."""
    params = polar_params(cfg)
    phi = _clamp_phi(phi, params)
    mv2 = cfg.mu * cfg.v**2
    base = np.cos(phi) + params.B * np.sin(phi)
    out = -mv2 * phi / params.A - (mv2 * params.B / params.A) * np.log(base)
    return float(out) if out.ndim == 0 else out


def polar_radius(phi, cfg: RampConfig):
    """r(phi) = exp(-mu v^2 phi / A) (cos phi + B sin phi)^(-mu v^2 B / A).

    Polar angle convention: (xi1, xi2) = r (cos phi, -sin phi). Angles within
    1e-12 of the domain ends are clamped inward.
    """
    return np.exp(polar_log_radius(phi, cfg))


def polar_state(phi, cfg: RampConfig) -> np.ndarray:
    """Point(s) (xi1, xi2) of the polar closed-form trajectory."""
    phi_arr = np.asarray(phi, dtype=float)
    r = np.asarray(polar_radius(phi_arr, cfg))
    return np.stack([r * np.cos(phi_arr), -r * np.sin(phi_arr)], axis=-1)


def integrate_rk4(
    system: System,
    state0,
    cfg: RampConfig,
    h: float,
    n_steps: int,
    max_norm: float | None = None,
    min_norm: float | None = None,
    backward: bool = False,
) -> PhaseTrajectory:
    """Classic fixed-step fourth-order Runge-Kutta.

    Integration stops early when the state leaves ``max_norm`` or drops
    below ``min_norm``; the general system always stops within 1e-10 of
    its singular origin. ``backward=True`` integrates the reversed field;
    the returned times are then ``-t`` reordered to be increasing.

    Raises
    ------
    ValueError
        If ``h <= 0`` or ``n_steps < 1``.
    StepIntoSingularity
        If the general system is started at (or within 1e-10 of) the origin.
    """
    if not h > 0:
        raise ValueError(f"step size must be positive, got {h}")
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    rhs = _scalar_field(system, cfg)
    step = -h if backward else h
    half = 0.5 * step
    y1, y2 = map(float, tuple(state0))
    floor = SINGULAR_RADIUS if system is System.GENERAL else 0.0
    if min_norm is not None:
        floor = max(floor, min_norm)
    if system is System.GENERAL and math.hypot(y1, y2) <= SINGULAR_RADIUS:
        raise StepIntoSingularity("initial state at the singular origin")

    out = np.empty((n_steps + 1, 2))
    out[0] = y1, y2
    reason = "steps"
    n = n_steps
    for i in range(n_steps):
        try:
            a1, a2 = rhs(y1, y2)
            b1, b2 = rhs(y1 + half * a1, y2 + half * a2)
            c1, c2 = rhs(y1 + half * b1, y2 + half * b2)
            d1, d2 = rhs(y1 + step * c1, y2 + step * c2)
            z1 = y1 + step / 6.0 * (a1 + 2 * b1 + 2 * c1 + d1)
            z2 = y2 + step / 6.0 * (a2 + 2 * b2 + 2 * c2 + d2)
            norm = math.hypot(z1, z2)
        except (OverflowError, ZeroDivisionError):
            norm = math.inf
        if not math.isfinite(norm):
            n, reason = i, "overflow"
            break
        if norm <= floor:
            n, reason = i, "singularity" if system is System.GENERAL else "min_norm"
            break
        y1, y2 = z1, z2
        out[i + 1] = y1, y2
        if max_norm is not None and norm > max_norm:
            n, reason = i + 1, "max_norm"
            break
    states = out[: n + 1]
    t = h * np.arange(n + 1)
    if backward:
        t, states = -t[::-1], states[::-1]
    return PhaseTrajectory(system, t, states, cfg, h, reason)


def join_backward_forward(back: PhaseTrajectory, fwd: PhaseTrajectory, meta: dict | None = None) -> PhaseTrajectory:
    """Concatenate a backward run (ending at the seed) with a forward run from the same seed."""
    t = np.concatenate([back.t[:-1], fwd.t])
    states = np.concatenate([back.states[:-1], fwd.states])
    return PhaseTrajectory(
        fwd.system, t, states, fwd.cfg, fwd.h, f"{back.stop_reason}/{fwd.stop_reason}",
        dict(fwd.meta if meta is None else meta),
    )


def default_seeds(bbox, n: int = 16) -> np.ndarray:
    """``n`` points on a circle of radius 0.6 x the smaller half-extent of ``bbox``."""
    x0, y0, x1, y1 = bbox
    radius = 0.6 * min(x1 - x0, y1 - y0) / 2
    cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
    ang = 2 * np.pi * (np.arange(n) + 0.5) / n
    return np.column_stack([cx + radius * np.cos(ang), cy + radius * np.sin(ang)])


def phase_portrait(
    cfg: RampConfig,
    bbox=(-2.0, -2.0, 2.0, 2.0),
    grid_n: int = 16,
    seeds=None,
    h: float = 1e-2,
    n_steps: int = 4000,
    include_halflines: bool = True,
) -> list[PhaseTrajectory]:
    """Trajectories through ``seeds`` (default: ``grid_n`` points on a circle), both directions.

    Uses the linear system for v = 1 and the quadratic system otherwise;
    for v != 1 the two half-line solutions are appended (tagged in ``meta``).
    Integration stops once a trajectory leaves twice the bounding box.
    """
    if grid_n < 2:
        raise ValueError("grid_n must be >= 2")
    system = System.LINEAR_V1 if cfg.v == 1.0 else System.QUADRATIC
    if seeds is None:
        seeds = default_seeds(bbox, grid_n)
    x0, y0, x1, y1 = bbox
    reach = 2.0 * max(abs(x0), abs(x1), abs(y0), abs(y1)) * math.sqrt(2)
    trajs = []
    for i, seed in enumerate(np.asarray(seeds, dtype=float)):
        back = integrate_rk4(system, seed, cfg, h, n_steps, max_norm=reach, backward=True)
        fwd = integrate_rk4(system, seed, cfg, h, n_steps, max_norm=reach)
        meta = {"kind": "seed", "index": i, "seed": [float(seed[0]), float(seed[1])]}
        trajs.append(join_backward_forward(back, fwd, meta))
    if system is System.QUADRATIC and include_halflines:
        for hl in halfline_solutions(cfg):
            g = np.linspace(0.0, reach, 200)
            pts = g[:, None] * hl.direction[None, :]
            meta = {"kind": "halfline", "sign": hl.sign}
            trajs.append(PhaseTrajectory(system, g, pts, cfg, float(g[1] - g[0]), "halfline", meta))
    return trajs
