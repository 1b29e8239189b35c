"""
Closed-form constant-speed ramps for the inverse central harmonic oscillator.

Families (all for F(r) = -m/r):

* ``CIRCLE_ORIGIN`` -- circles about the origin, only at v = 1;
* ``V1_FAMILY``     -- the non-circular v = 1 ramps, starting at (1, 0) with
  initial heading ``u``; their TreadmillSleds are logarithmic spirals;
* ``LOG_SPIRAL``    -- the two logarithmic-spiral ramps for v != 1, whose
  TreadmillSleds are half-lines;
* ``GENERAL_POLAR`` -- every other v != 1 ramp, up to rotation and dilation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from .dynamics import halfline_solutions, polar_log_radius, polar_params, polar_state
from .errors import RampLabError, SpecParseError, TOutOfDomain, UOutOfRange, VEqualsOne
from .geometry import ArcCurve, reparam_arclength, sample_parametric
from .ramp_law import RampConfig

DOMAIN_SHRINK = 1e-3
SPIRAL_RADII = (0.5, 2.0)


class FamilyKind(Enum):
    CIRCLE_ORIGIN = "circle"
    V1_FAMILY = "v1"
    LOG_SPIRAL = "spiral"
    GENERAL_POLAR = "polar"


class Asymptotics(Enum):
    UNBOUNDED_TO_SPIRAL = "UnboundedToSpiral"
    BOUNDED_TO_SPIRAL = "BoundedToSpiral"
    CIRCLES_AND_SPIRALS = "CirclesAndSpirals"


def _as_array(t):
    arr = np.asarray(t, dtype=float)
    return arr, arr.ndim == 0


def _pack(x, y, scalar):
    if scalar:
        return np.array([float(x), float(y)])
    return np.column_stack([x, y])


def v1_domain(u: float) -> tuple[float, float]:
    """Open parameter interval on which cos(t + u) < 0."""
    return math.pi / 2 - u, 3 * math.pi / 2 - u


def _check_u(u: float):
    if not math.pi / 2 < u < 3 * math.pi / 2:
        raise UOutOfRange(f"u must lie in (pi/2, 3pi/2), got {u}")


def ramp_v1(u: float, mu: float, t):
    """Non-circular v = 1 ramp through alpha(0) = (1, 0) with alpha'(0) along (cos u, sin u).

    alpha(t) = e^{-mu t} (cos(mu L), sin(mu L)), L = log(cos(t + u) / cos u),
    for t in (pi/2 - u, 3pi/2 - u). ``t`` is not arc length.
    """
    _check_u(u)
    t, scalar = _as_array(t)
    lo, hi = v1_domain(u)
    if np.any((t <= lo) | (t >= hi)):
        raise TOutOfDomain(f"t must lie in ({lo:.15g}, {hi:.15g})")
    L = np.log(np.cos(t + u) / math.cos(u))
    decay = np.exp(-mu * t)
    return _pack(decay * np.cos(mu * L), decay * np.sin(mu * L), scalar)


def v1_tms(u: float, mu: float, t):
    """TreadmillSled of :func:`ramp_v1`: e^{-mu t} (-cos(t + u), sin(t + u))."""
    t, scalar = _as_array(t)
    decay = np.exp(-mu * t)
    return _pack(-decay * np.cos(t + u), decay * np.sin(t + u), scalar)


def _spiral_consts(cfg: RampConfig):
    if cfg.v == 1.0:
        raise VEqualsOne("logarithmic-spiral ramps need v != 1")
    r0 = 1.0 / (cfg.mu * (1.0 - cfg.v**2))
    return r0, 1.0 / (cfg.mu * cfg.v**2)


def spiral_ramp(cfg: RampConfig, sign: int, t):
    """Logarithmic-spiral ramp +-(e^t / (mu v^2)) (cos r0 t + r0 sin r0 t, sin r0 t - r0 cos r0 t).

    Increasing ``t`` moves away from the origin, which is the inadmissible
    orientation for the attractive force; :func:`sample_family` traverses it
    backwards.
    """
    r0, k = _spiral_consts(cfg)
    t, scalar = _as_array(t)
    g = sign * k * np.exp(t)
    c, s = np.cos(r0 * t), np.sin(r0 * t)
    return _pack(g * (c + r0 * s), g * (s - r0 * c), scalar)


def spiral_tms(cfg: RampConfig, sign: int, t):
    """The half-line +-(e^t / (mu v^2)) (-1, r0) traced by the spiral's TreadmillSled."""
    r0, k = _spiral_consts(cfg)
    t, scalar = _as_array(t)
    g = sign * k * np.exp(t)
    return _pack(-g, g * r0, scalar)


def spiral_param_for_radius(cfg: RampConfig, radius: float) -> float:
    """Parameter t at which the spiral ramp is at distance ``radius`` from the origin."""
    r0, k = _spiral_consts(cfg)
    return math.log(radius / (k * math.sqrt(1.0 + r0 * r0)))


def general_angle(phi, cfg: RampConfig):
    """Theta(phi) = mu v^2 (B phi - log(B sin phi + cos phi)) / (B^2 + 1)."""
    p = polar_params(cfg)
    phi = np.asarray(phi, dtype=float)
    base = p.B * np.sin(phi) + np.cos(phi)
    if np.any(base <= 0):
        raise ValueError("B sin(phi) + cos(phi) must stay positive on the domain")
    return cfg.mu * cfg.v**2 * (p.B * phi - np.log(base)) / (p.B**2 + 1.0)


def general_ramp(phi, cfg: RampConfig):
    """Non-spiral v != 1 ramp alpha(phi) = r(phi) (-cos Theta(phi), sin Theta(phi)).

    Its TreadmillSled is the polar closed form r(phi) (cos phi, -sin phi).
    """
    phi_arr, scalar = _as_array(phi)
    r = np.exp(polar_log_radius(phi_arr, cfg))
    theta = general_angle(np.clip(phi_arr, *_inner_domain(cfg, 0.0)), cfg)
    return _pack(-r * np.cos(theta), r * np.sin(theta), scalar)


def _inner_domain(cfg: RampConfig, shrink: float) -> tuple[float, float]:
    lo, hi = polar_params(cfg).domain
    eps = max(shrink * (hi - lo), 1e-12)
    return lo + eps, hi - eps


@dataclass(frozen=True)
class RampFamily:
    """A closed-form ramp family member.

    ``R`` is the circle radius, ``u`` the initial heading of the v = 1
    family, ``sign`` picks one of the two spirals; ``rotation`` and
    ``dilation`` place any member anywhere in its symmetry class.
    """

    kind: FamilyKind
    cfg: RampConfig
    R: float = 1.0
    u: float = 0.75 * math.pi
    sign: int = 1
    rotation: float = 0.0
    dilation: float = 1.0

    def __post_init__(self):
        if not self.cfg.mu > 0:
            raise ValueError("closed-form families need mu > 0")
        if self.dilation <= 0:
            raise ValueError("dilation must be positive")
        if self.kind in (FamilyKind.CIRCLE_ORIGIN, FamilyKind.V1_FAMILY):
            if self.cfg.v != 1.0:
                raise VEqualsOne(f"{self.kind.value} ramps exist only for v = 1")
            if self.kind is FamilyKind.CIRCLE_ORIGIN and not self.R > 0:
                raise ValueError("circle radius must be positive")
            if self.kind is FamilyKind.V1_FAMILY:
                _check_u(self.u)
        else:
            if self.cfg.v == 1.0:
                raise VEqualsOne(f"{self.kind.value} ramps need v != 1")
            if self.sign not in (1, -1):
                raise ValueError("sign must be +1 or -1")

    def _place(self, pts: np.ndarray) -> np.ndarray:
        if self.rotation == 0.0 and self.dilation == 1.0:
            return pts
        c, s = math.cos(self.rotation), math.sin(self.rotation)
        return self.dilation * (pts @ np.array([[c, -s], [s, c]]).T)

    def evaluate(self, t) -> np.ndarray:
        """Points at native parameter values (angle, t or phi)."""
        t = np.asarray(t, dtype=float)
        if self.kind is FamilyKind.CIRCLE_ORIGIN:
            pts = self.R * np.column_stack([np.cos(t), np.sin(t)])
        elif self.kind is FamilyKind.V1_FAMILY:
            pts = ramp_v1(self.u, self.cfg.mu, t)
        elif self.kind is FamilyKind.LOG_SPIRAL:
            pts = spiral_ramp(self.cfg, self.sign, t)
        else:
            pts = general_ramp(t, self.cfg)
        return self._place(np.atleast_2d(pts))

    def predicted_tms(self, t) -> np.ndarray:
        """TreadmillSled at native parameters, in the orientation :func:`sample_family` produces."""
        t = np.asarray(t, dtype=float)
        if self.kind is FamilyKind.CIRCLE_ORIGIN:
            g = np.column_stack([np.zeros_like(t), np.full_like(t, self.R)])
        elif self.kind is FamilyKind.V1_FAMILY:
            g = v1_tms(self.u, self.cfg.mu, t)
        elif self.kind is FamilyKind.LOG_SPIRAL:
            # Traversed backwards, which reflects the TreadmillSled through the
            # origin. The two signs differ by a half turn, which the
            # TreadmillSled does not see: both land on the ray -a.
            g = spiral_tms(self.cfg, -1, t)
        else:
            g = polar_state(t, self.cfg)
        return self.dilation * np.atleast_2d(g)

    def default_span(self, shrink: float = DOMAIN_SHRINK) -> tuple[float, float]:
        """Native parameter span, ordered in the direction of traversal."""
        if self.kind is FamilyKind.CIRCLE_ORIGIN:
            return 0.0, 2 * math.pi
        if self.kind is FamilyKind.V1_FAMILY:
            lo, hi = v1_domain(self.u)
            eps = shrink * (hi - lo)
            return lo + eps, hi - eps
        if self.kind is FamilyKind.LOG_SPIRAL:
            lo = spiral_param_for_radius(self.cfg, SPIRAL_RADII[0])
            hi = spiral_param_for_radius(self.cfg, SPIRAL_RADII[1])
            return hi, lo
        return _inner_domain(self.cfg, shrink)


class SampledRamp(NamedTuple):
    curve: ArcCurve
    params: np.ndarray
    family: RampFamily


def sample_family(family: RampFamily, h: float = 1e-3, span: tuple[float, float] | None = None) -> SampledRamp:
    """Sample a family member at arc-length spacing ~``h``.

    Circles come back closed. Other members are sampled over ``span``
    (default :meth:`RampFamily.default_span`) in an orientation that is
    admissible for the attractive force: towards the origin. General polar
    ramps are traversed with increasing phi (the direction of the
    TreadmillSled flow); they are admissible only where cos(phi) >= 0.
    """
    if family.kind is FamilyKind.CIRCLE_ORIGIN and span is None:
        n = max(16, int(round(2 * math.pi * family.R * family.dilation / h)))
        theta = np.linspace(0.0, 2 * math.pi, n, endpoint=False)
        return SampledRamp(reparam_arclength(family.evaluate(theta), closed=True), theta, family)
    t0, t1 = span if span is not None else family.default_span()
    t, pts = sample_parametric(family.evaluate, t0, t1, h)
    return SampledRamp(reparam_arclength(pts), t, family)


def spiral_distance(phi, cfg: RampConfig) -> np.ndarray:
    """Distance from the general ramp's TreadmillSled to the nearest spiral's TreadmillSled.

    The TreadmillSled is rotation invariant, so this measures how close the
    ramp is to the spiral family independently of the rotation that the
    spiral is matched with. The two spirals' TreadmillSleds are the rays
    +-a, which together span one line through the origin.
    """
    hl, _ = halfline_solutions(cfg)
    d = hl.direction
    p = polar_state(phi, cfg)
    return np.abs(p[..., 0] * d[1] - p[..., 1] * d[0])


@dataclass(frozen=True)
class AsymptoticReport:
    kind: Asymptotics
    min_radius: float
    max_radius: float
    tail_monotone: bool


def asymptotic_report(cfg: RampConfig, shrink: float = DOMAIN_SHRINK, n: int = 2001, u: float = 0.75 * math.pi) -> AsymptoticReport:
    """Classify long-run behaviour and back it with sampled measurements.

    For v != 1 the general ramp is sampled over its domain; the reported
    radii are min/max |alpha| and ``tail_monotone`` says whether the
    distance to the spiral family decreases strictly over the last 10% of
    the sampled domain. For v = 1 the radii of the v = 1 family member with
    heading ``u`` are reported (the two limiting circles are not known in
    closed form).
    """
    if cfg.v == 1.0:
        lo, hi = v1_domain(u)
        eps = shrink * (hi - lo)
        t = np.linspace(lo + eps, hi - eps, n)
        r = np.linalg.norm(ramp_v1(u, cfg.mu, t), axis=1)
        return AsymptoticReport(Asymptotics.CIRCLES_AND_SPIRALS, float(r.min()), float(r.max()), True)
    lo, hi = _inner_domain(cfg, shrink)
    phi = np.linspace(lo, hi, n)
    r = np.linalg.norm(general_ramp(phi, cfg), axis=1)
    tail = phi >= hi - 0.1 * (hi - lo)
    dist = spiral_distance(phi[tail], cfg)
    kind = Asymptotics.UNBOUNDED_TO_SPIRAL if cfg.v > 1 else Asymptotics.BOUNDED_TO_SPIRAL
    return AsymptoticReport(kind, float(r.min()), float(r.max()), bool(np.all(np.diff(dist) < 0)))


def classify_asymptotics(cfg: RampConfig) -> Asymptotics:
    """v > 1: unbounded, converging to a spiral; v < 1: bounded, converging to a spiral; v = 1: circles and v = 1 family."""
    return asymptotic_report(cfg).kind


def _parse_number(text: str) -> float:
    text = text.strip()
    if text.endswith("pi"):
        coef = text[:-2].rstrip("*") or "1"
        return float(coef) * math.pi
    return float(text)


def parse_family(spec: str, cfg: RampConfig) -> RampFamily:
    """Parse ``circle:R=<r>``, ``v1:u=<rad>``, ``spiral:sign=<+|->`` or ``polar:``.

    Radians may be written as multiples of pi, e.g. ``v1:u=0.75pi``.
    """
    head, colon, body = spec.strip().partition(":")
    if not colon:
        raise SpecParseError(f"family spec needs a ':' ({spec!r})")
    fields = {}
    for item in filter(None, (x.strip() for x in body.split(","))):
        key, eq, val = item.partition("=")
        if not eq:
            raise SpecParseError(f"malformed field {item!r}")
        fields[key.strip()] = val.strip()
    try:
        if head == "circle":
            _only(fields, {"R"})
            return RampFamily(FamilyKind.CIRCLE_ORIGIN, cfg, R=_parse_number(fields.get("R", "1")))
        if head == "v1":
            _only(fields, {"u"})
            return RampFamily(FamilyKind.V1_FAMILY, cfg, u=_parse_number(fields.get("u", "0.75pi")))
        if head == "spiral":
            _only(fields, {"sign"})
            sign = {"+": 1, "+1": 1, "-": -1, "-1": -1}.get(fields.get("sign", "+"))
            if sign is None:
                raise SpecParseError(f"spiral sign must be + or -, got {fields['sign']!r}")
            return RampFamily(FamilyKind.LOG_SPIRAL, cfg, sign=sign)
        if head == "polar":
            _only(fields, set())
            return RampFamily(FamilyKind.GENERAL_POLAR, cfg)
    except RampLabError:
        raise
    except ValueError as exc:
        raise SpecParseError(str(exc)) from None
    raise SpecParseError(f"unknown family {head!r}")


def _only(fields: dict, allowed: set):
    extra = set(fields) - allowed
    if extra:
        raise SpecParseError(f"unexpected fields {sorted(extra)}")
