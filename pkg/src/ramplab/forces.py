"""Central force field descriptors."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .errors import NonpositiveRadius, SpecParseError


class ForceKind(Enum):
    POWER_LAW = "power"
    CUSTOM = "custom"


@dataclass(frozen=True)
class CentralForce:
    """Radial force ``F(r) * r_hat``; ``F > 0`` repels, ``F < 0`` attracts.

    Power laws are ``F(r) = epsilon * mass * r**exponent``. Custom profiles
    are arbitrary callables ``r -> F(r)``; they are trusted to be nonzero
    (``check_profile`` samples them when asked).
    """

    kind: ForceKind
    epsilon: int = -1
    exponent: float = -1.0
    mass: float = 1.0
    profile: Callable[[float], float] | None = None

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError(f"mass must be positive, got {self.mass}")
        if self.kind is ForceKind.POWER_LAW:
            if self.epsilon not in (-1, 1):
                raise ValueError(f"epsilon must be -1 or +1, got {self.epsilon}")
        elif self.profile is None:
            raise ValueError("custom forces need a profile")

    @classmethod
    def power(cls, epsilon: int, exponent: float, mass: float = 1.0) -> "CentralForce":
        return cls(ForceKind.POWER_LAW, int(epsilon), float(exponent), float(mass))

    @classmethod
    def custom(cls, profile: Callable[[float], float], mass: float = 1.0) -> "CentralForce":
        return cls(ForceKind.CUSTOM, mass=float(mass), profile=profile)

    @property
    def is_power_law(self) -> bool:
        return self.kind is ForceKind.POWER_LAW

    def __call__(self, r):
        return force_eval(self, r)


def icho(mass: float = 1.0) -> CentralForce:
    """Inverse central harmonic oscillator, F(r) = -m/r."""
    return CentralForce.power(-1, -1.0, mass)


def force_eval(force: CentralForce, r):
    """Signed magnitude F(r). Accepts a scalar or an array of radii.

    Raises
    ------
    NonpositiveRadius
        If any ``r <= 0``.
    """
    r_arr = np.asarray(r, dtype=float)
    if np.any(~(r_arr > 0)):
        raise NonpositiveRadius(f"force evaluated at non-positive radius {r}")
    if force.kind is ForceKind.POWER_LAW:
        if force.exponent == -1.0:
            # exact -m/r, no pow() rounding
            out = force.epsilon * force.mass / r_arr
        else:
            out = force.epsilon * force.mass * r_arr ** force.exponent
    else:
        out = np.vectorize(force.profile, otypes=[float])(r_arr)
    return float(out) if np.ndim(out) == 0 else out


def check_profile(force: CentralForce, r_min: float, r_max: float, n: int = 1000) -> bool:
    """Sample a force on a log grid and warn if it vanishes or changes sign."""
    r = np.geomspace(r_min, r_max, n)
    f = np.asarray(force_eval(force, r))
    ok = bool(np.all(f > 0) or np.all(f < 0))
    if not ok:
        warnings.warn("force profile vanishes or changes sign on the sampled range", stacklevel=2)
    return ok


def parse_force(spec: str) -> CentralForce:
    """Parse ``icho`` or ``power:eps=<+1|-1>,n=<real>[,m=<real>]``."""
    spec = spec.strip()
    if spec == "icho":
        return icho()
    head, _, body = spec.partition(":")
    if head != "power" or not body:
        raise SpecParseError(f"unknown force spec {spec!r}")
    fields = {}
    for item in body.split(","):
        key, eq, val = item.partition("=")
        if not eq:
            raise SpecParseError(f"malformed field {item!r} in {spec!r}")
        fields[key.strip()] = val.strip()
    unknown = set(fields) - {"eps", "n", "m"}
    if unknown or not {"eps", "n"} <= set(fields):
        raise SpecParseError(f"power force needs eps and n (optional m), got {sorted(fields)}")
    try:
        eps = float(fields["eps"])
        n = float(fields["n"])
        m = float(fields.get("m", "1"))
    except ValueError as exc:
        raise SpecParseError(str(exc)) from None
    if eps not in (-1.0, 1.0) or not (math.isfinite(n) and math.isfinite(m)) or m <= 0:
        raise SpecParseError(f"invalid power force parameters in {spec!r}")
    return CentralForce.power(int(eps), n, m)
