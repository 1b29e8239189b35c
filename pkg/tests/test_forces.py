import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ramplab.errors import NonpositiveRadius, SpecParseError
from ramplab.forces import CentralForce, ForceKind, check_profile, force_eval, icho, parse_force


@given(st.floats(1e-6, 1e6), st.floats(0.1, 10))
def test_icho_is_exact(r, m):
    assert force_eval(icho(m), r) == -m / r


def test_power_law_and_vectorization():
    f = CentralForce.power(1, 2.0, 3.0)
    assert f(2.0) == 12.0
    assert np.allclose(f(np.array([1.0, 2.0])), [3.0, 12.0])


def test_custom_profile():
    f = CentralForce.custom(lambda r: -math.exp(-r))
    assert f.kind is ForceKind.CUSTOM
    assert math.isclose(f(1.0), -math.exp(-1))


@pytest.mark.parametrize("r", [0.0, -1.0, float("nan")])
def test_nonpositive_radius(r):
    with pytest.raises(NonpositiveRadius):
        force_eval(icho(), r)


def test_invalid_constructions():
    with pytest.raises(ValueError):
        CentralForce.power(2, 1.0)
    with pytest.raises(ValueError):
        CentralForce.power(-1, 1.0, mass=0.0)
    with pytest.raises(ValueError):
        CentralForce(ForceKind.CUSTOM)


def test_check_profile_warns_on_sign_change():
    assert check_profile(icho(), 0.1, 10)
    with pytest.warns(UserWarning):
        assert not check_profile(CentralForce.custom(lambda r: r - 1.0), 0.1, 10)


def test_parse_force():
    assert parse_force("icho") == icho()
    f = parse_force("power:eps=+1,n=1")
    assert (f.epsilon, f.exponent, f.mass) == (1, 1.0, 1.0)
    assert parse_force("power:eps=-1,n=-2,m=2").mass == 2.0
    for bad in ("gravity", "power:", "power:eps=2,n=1", "power:n=1", "power:eps=1,n=x", "power:eps=1,n=1,q=3"):
        with pytest.raises(SpecParseError):
            parse_force(bad)
