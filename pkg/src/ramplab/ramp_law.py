"""
The constant-speed ramp law.

A unit-speed curve alpha(s) with normal n = J(alpha') is a constant-speed
ramp with speed v under the central force F(r) and kinetic friction mu iff

    F(r) <alpha, alpha'> / r >= 0
    kappa = F(r) / (m v^2 r) * (<alpha, alpha'> / mu + <alpha, n>)

The normal-force magnitude is lambda = F(r) <alpha, alpha'> / (mu r).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

import numpy as np
from scipy.optimize import bisect

from .errors import AtOrigin, CurveThroughOrigin, MixedAdmissibility, NoBracket, NonpositiveScale
from .forces import CentralForce, ForceKind, force_eval
from .geometry import ArcCurve, UNIT_TOL, reparam_arclength

ADMISSIBILITY_TOL = 1e-7
BISECT_RTOL = 1e-10
BISECT_MAXITER = 200


@dataclass(frozen=True)
class RampConfig:
    """Friction coefficient ``mu`` and constant speed ``v``.

    ``mu == 0`` is accepted only as the frictionless variant understood by
    :func:`ramp_residual`; everything else needs ``mu > 0``.
    """

    mu: float
    v: float

    def __post_init__(self):
        if not (math.isfinite(self.mu) and self.mu >= 0):
            raise ValueError(f"mu must be a finite non-negative number, got {self.mu}")
        if not (math.isfinite(self.v) and self.v > 0):
            raise ValueError(f"v must be a finite positive number, got {self.v}")

    @property
    def frictionless(self) -> bool:
        return self.mu == 0


@dataclass(frozen=True)
class RampReport:
    max_residual: float
    residual_series: np.ndarray = field(repr=False)
    admissible_everywhere: bool
    min_normal_force: float
    orientation_flipped: bool
    mixed_admissibility: bool = False

    def to_json(self) -> dict:
        return {
            "max_residual": self.max_residual,
            "admissible_everywhere": self.admissible_everywhere,
            "min_normal_force": self.min_normal_force,
            "orientation_flipped": self.orientation_flipped,
            "series": [[float(s), float(r)] for s, r in self.residual_series],
        }

    def passes(self, tol: float) -> bool:
        return self.max_residual < tol


def _check_state(pos, tangent):
    pos = np.asarray(pos, dtype=float)
    tangent = np.asarray(tangent, dtype=float)
    r = float(np.hypot(*pos))
    if r == 0.0:
        raise AtOrigin("the ramp law is singular at the origin")
    if abs(np.hypot(*tangent) - 1.0) > UNIT_TOL:
        raise ValueError("tangent must be a unit vector")
    return pos, tangent, r


def _need_friction(cfg: RampConfig):
    if cfg.frictionless:
        raise ValueError("this operation needs mu > 0; use ramp_residual for the frictionless case")


def required_curvature(pos, tangent, force: CentralForce, cfg: RampConfig) -> float:
    """Curvature the ramp law demands at position ``pos`` moving along ``tangent``.

    >>> from ramplab.forces import icho
    >>> required_curvature((2.0, 0.0), (0.0, 1.0), icho(), RampConfig(0.5, 1.0))
    0.5
    """
    _need_friction(cfg)
    pos, tangent, r = _check_state(pos, tangent)
    normal = np.array([-tangent[1], tangent[0]])
    radial = pos @ tangent
    lateral = pos @ normal
    f = force_eval(force, r)
    return float(f / (force.mass * cfg.v**2 * r) * (radial / cfg.mu + lateral))


def admissibility_and_normal_force(pos, tangent, force: CentralForce, cfg: RampConfig):
    """Return ``(admissible, lam)`` at one state.

    ``admissible`` is ``F(r) <alpha, alpha'> / r >= 0`` and ``lam`` is the
    normal-force magnitude ``F(r) <alpha, alpha'> / (mu r)``.
    """
    _need_friction(cfg)
    pos, tangent, r = _check_state(pos, tangent)
    q = force_eval(force, r) * float(pos @ tangent) / r
    return q >= 0, q / cfg.mu


def _required_curvature_array(curve: ArcCurve, force: CentralForce, cfg: RampConfig, r):
    radial = np.einsum("ij,ij->i", curve.pos, curve.tangent)
    lateral = np.einsum("ij,ij->i", curve.pos, curve.normal)
    f = force_eval(force, r)
    return f / (force.mass * cfg.v**2 * r) * (radial / cfg.mu + lateral)


def _admissibility(curve: ArcCurve, force: CentralForce, r, tol: float):
    f = np.asarray(force_eval(force, r))
    radial = np.einsum("ij,ij->i", curve.pos, curve.tangent)
    q = f * radial / r
    ok = q >= -tol * np.abs(f)
    return q, ok


def ramp_residual(
    curve: ArcCurve,
    force: CentralForce,
    cfg: RampConfig,
    admissibility_tol: float = ADMISSIBILITY_TOL,
) -> RampReport:
    """Check a sampled curve against the ramp law.

    The residual at each sample is the finite-difference curvature minus
    the curvature the law requires there. A curve that fails admissibility at
    every sample is re-checked with reversed orientation (the law itself is
    orientation independent, admissibility is not). A curve whose
    admissibility changes sign is reported with a :class:`MixedAdmissibility`
    warning.

    With ``cfg.mu == 0`` the residual is ``<alpha, alpha'>`` instead, since the
    frictionless tangential balance forces the distance to the origin to be
    constant; the normal force then comes from the normal balance.

    Raises
    ------
    CurveThroughOrigin
        If any sample sits at the origin.
    """
    r = np.linalg.norm(curve.pos, axis=1)
    if np.any(r <= 1e-12 * max(r.max(), 1.0)):
        raise CurveThroughOrigin("curve passes through the centre of force")

    if cfg.frictionless:
        radial = np.einsum("ij,ij->i", curve.pos, curve.tangent)
        lateral = np.einsum("ij,ij->i", curve.pos, curve.normal)
        f = np.asarray(force_eval(force, r))
        lam = force.mass * cfg.v**2 * curve.curvature - f * lateral / r
        series = np.column_stack([curve.s, radial])
        return RampReport(
            max_residual=float(np.abs(radial).max()),
            residual_series=series,
            admissible_everywhere=bool(np.all(lam >= -admissibility_tol * np.abs(f))),
            min_normal_force=float(lam.min()),
            orientation_flipped=False,
        )

    flipped = False
    q, ok = _admissibility(curve, force, r, admissibility_tol)
    if not ok.any():
        curve = curve.reversed()
        r = np.linalg.norm(curve.pos, axis=1)
        q, ok = _admissibility(curve, force, r, admissibility_tol)
        flipped = True
    mixed = bool(ok.any() and not ok.all())
    if mixed:
        warnings.warn(
            f"admissibility changes sign along the curve ({int((~ok).sum())} of {len(ok)} samples fail)",
            MixedAdmissibility,
            stacklevel=2,
        )
    residual = curve.curvature - _required_curvature_array(curve, force, cfg, r)
    return RampReport(
        max_residual=float(np.abs(residual).max()),
        residual_series=np.column_stack([curve.s, residual]),
        admissible_everywhere=bool(ok.all()),
        min_normal_force=float((q / cfg.mu).min()),
        orientation_flipped=flipped,
        mixed_admissibility=mixed,
    )


class CircleRamp(Enum):
    ALL_RADII = "all radii"


def circle_ramp_radius(force: CentralForce, cfg: RampConfig, bracket: tuple[float, float] | None = None):
    """Radius of the circular ramps centred at the origin.

    Returns ``CircleRamp.ALL_RADII``, a radius ``R`` (float) or ``None``.
    Circles are ramps iff ``F(R) = -m v^2 / R``. Power laws are solved in
    closed form; custom forces need ``bracket=(r_lo, r_hi)`` which is scanned
    for a sign change of ``F(R) R + m v^2`` and then bisected.
    """
    if force.kind is ForceKind.POWER_LAW:
        if force.epsilon == 1:
            return None
        if force.exponent == -1.0:
            return CircleRamp.ALL_RADII if math.isclose(cfg.v, 1.0, rel_tol=0, abs_tol=1e-12) else None
        return cfg.v ** (2.0 / (force.exponent + 1.0))

    if bracket is None:
        raise ValueError("custom forces need a search bracket")
    lo, hi = bracket
    if not 0 < lo < hi:
        raise ValueError("bracket must satisfy 0 < lo < hi")

    def g(R):
        return force_eval(force, R) * R + force.mass * cfg.v**2

    grid = np.geomspace(lo, hi, 257)
    vals = np.array([g(R) for R in grid])
    zero = np.flatnonzero(vals == 0.0)
    if zero.size:
        return float(grid[zero[0]])
    change = np.flatnonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))
    if change.size == 0:
        raise NoBracket(f"F(R) R + m v^2 keeps its sign on [{lo}, {hi}]")
    i = int(change[0])
    return float(bisect(g, grid[i], grid[i + 1], xtol=1e-300, rtol=BISECT_RTOL, maxiter=BISECT_MAXITER))


class DilatedRamp(NamedTuple):
    curve: ArcCurve
    speed: float | None


def dilate_ramp(curve: ArcCurve, c: float, force: CentralForce | None = None, cfg: RampConfig | None = None) -> DilatedRamp:
    """Scale a ramp by ``c`` about the origin, eta(s) = c alpha(s / c).

    For a power-law force the dilated curve is a ramp with the same friction
    and speed ``c**((n + 1) / 2) * v``; that speed is returned when ``force``
    and ``cfg`` are given.
    """
    if not c > 0:
        raise NonpositiveScale(f"dilation factor must be positive, got {c}")
    scaled = reparam_arclength(c * curve.pos, closed=curve.closed, fidelity_tol=curve.fidelity_tol)
    speed = None
    if force is not None and cfg is not None and force.is_power_law:
        speed = c ** ((force.exponent + 1.0) / 2.0) * cfg.v
    return DilatedRamp(scaled, speed)
