import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from balanced_invariants.core import (
    Bound,
    BoundKind,
    HyperbolicValue,
    as_point,
    complex_to_json,
    mobius,
    poincare,
    poincare_star,
    star,
    unstar,
)

from oracles import poincare_cosh

radius = st.floats(0, 0.98)
angle = st.floats(0, 2 * math.pi)
disc_point = st.builds(lambda r, t: r * complex(math.cos(t), math.sin(t)), radius, angle)


@given(st.floats(0, 8))
def test_star_unstar_roundtrip(x):
    assert unstar(star(x)) == pytest.approx(x, rel=1e-8, abs=1e-12)


@given(st.floats(0, 0.999999))
def test_unstar_star_roundtrip(s):
    assert star(unstar(s)) == pytest.approx(s, abs=1e-15)


def test_star_edges():
    assert star(math.inf) == 1.0
    assert unstar(1.0) == math.inf
    with pytest.raises(ValueError):
        star(-1)
    with pytest.raises(ValueError):
        unstar(1.5)


@given(disc_point, disc_point)
def test_poincare_matches_cosh_formula(a, b):
    assert poincare(a, b) == pytest.approx(poincare_cosh(a, b), rel=1e-7, abs=1e-9)


@given(disc_point, disc_point, disc_point)
def test_triangle_inequality(a, b, c):
    assert poincare(a, c) <= poincare(a, b) + poincare(b, c) + 1e-9


@given(disc_point, disc_point)
def test_poincare_symmetric(a, b):
    assert poincare_star(a, b) == pytest.approx(poincare_star(b, a), abs=1e-15)


@given(disc_point, disc_point)
def test_mobius_sends_b_to_zero_and_inverts(b, lam):
    psi = mobius(b)
    assert abs(psi(b)) < 1e-12
    inv = mobius(-b)
    assert abs(inv(psi(lam)) - lam) < 1e-9


@given(disc_point, disc_point, disc_point)
@settings(max_examples=50)
def test_mobius_is_isometry(b, x, y):
    psi = mobius(b)
    assert poincare_star(psi(x), psi(y)) == pytest.approx(poincare_star(x, y), abs=1e-9)


def test_mobius_vectorized():
    psi = mobius(0.3j)
    lam = np.array([0, 0.1, -0.5j])
    np.testing.assert_allclose(psi(lam), [psi(complex(x)) for x in lam])


def test_hyperbolic_value():
    v = HyperbolicValue(0.5, "UpperBound")
    assert v.kind is BoundKind.UPPER
    assert v.distance == pytest.approx(math.atanh(0.5))
    assert v.to_dict()["kind"] == "UpperBound"
    assert HyperbolicValue(1.0, BoundKind.EXACT).to_dict()["value_distance"] == "inf"
    assert HyperbolicValue.from_distance(math.atanh(0.3), BoundKind.LOWER).starred == pytest.approx(0.3)
    with pytest.raises(ValueError):
        HyperbolicValue(1.2, BoundKind.EXACT)
    with pytest.raises(ValueError):
        HyperbolicValue(float("nan"), BoundKind.EXACT)


def test_bound_and_points():
    assert Bound(1, "Exact").to_dict() == {"value": 1.0, "kind": "Exact"}
    assert as_point([1, 2j]).dtype == complex
    with pytest.raises(ValueError):
        as_point([1, 2], dim=3)
    with pytest.raises(ValueError):
        as_point([np.nan])
    assert complex_to_json(1 + 2j) == [1.0, 2.0]
    assert complex_to_json([1j]) == [[0.0, 1.0]]
