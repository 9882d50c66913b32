import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from balanced_invariants.domains import (
    CATALOG,
    Pseudoconvex,
    RemovedSet,
    balancedness_check,
    bisect_gauge,
    hull_minkowski,
    make_domain,
    minkowski,
    monomial_gauge,
    pseudoconvexity_probe,
    sample_inside,
    subadditivity_gap,
)
from balanced_invariants.optim import OptimizerBudget, restart_rng

from oracles import example9_member, example10_member, gauge_by_membership

BALANCED = [("polydisc", {"n": 2}), ("polydisc", {"n": 3}), ("ball", {"n": 2}), ("example9", {}),
            ("example9_n", {"n": 3}), ("example10", {"a": 0.8}), ("example7", {})]

coord = st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False)
scale = st.complex_numbers(min_magnitude=0.05, max_magnitude=3.0, allow_nan=False, allow_infinity=False)


def test_unknown_kind_lists_catalog():
    with pytest.raises(KeyError) as info:
        make_domain("nope")
    for kind in CATALOG:
        assert kind in str(info.value)


def test_bad_parameters():
    with pytest.raises(ValueError):
        make_domain("example10", {"a": 1.5})
    with pytest.raises(ValueError):
        make_domain("polydisc", {"bogus": 1})
    with pytest.raises(ValueError):
        make_domain("example9_mobius", {"b": 1.0})


def test_closed_form_values():
    assert minkowski(make_domain("polydisc", {"n": 2}), (0.5, 0.3)) == 0.5
    assert minkowski(make_domain("ball", {"n": 2}), (3, 4)) == pytest.approx(5.0)
    assert minkowski(make_domain("example9"), (0.3, 0.3)) == pytest.approx(0.6, abs=1e-12)
    assert minkowski(make_domain("example9"), (0.3, 0.3 + 1e-12j)) == pytest.approx(0.3)
    assert minkowski(make_domain("example10", {"a": 0.8}), (0, 0.5)) == pytest.approx(0.625, abs=1e-12)
    # frozen from an mpmath evaluation of max(|z1|, (|z1|^34 |z2|^55)^(1/89))
    assert minkowski(make_domain("example7"), (0.5, 1.2)) == pytest.approx(0.85887904642808375, abs=1e-12)


@pytest.mark.parametrize("kind,params", BALANCED)
def test_closed_form_matches_bisection(kind, params):
    dom = make_domain(kind, params)
    rng = restart_rng(3, 0)
    for z in sample_inside(dom, rng, 15, h_max=1.5, h_min=0.1):
        assert bisect_gauge(dom, z).value == pytest.approx(minkowski(dom, z), abs=1e-8)


def test_oracle_membership_gauges():
    dom10 = make_domain("example10", {"a": 0.8})
    for z in [(0, 0.5), (0.2, 0.5), (0.1 + 0.1j, -0.7), (0.3, 0.0)]:
        assert minkowski(dom10, z) == pytest.approx(gauge_by_membership(example10_member(0.8), z), abs=1e-9)
    dom9 = make_domain("example9")
    for z in [(0.3, 0.3), (0.3, 0.2), (-0.45j, -0.45j)]:
        assert minkowski(dom9, z) == pytest.approx(gauge_by_membership(example9_member, z), abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(BALANCED), st.lists(coord, min_size=3, max_size=3), scale)
def test_gauge_homogeneity(domain, coords, lam):
    dom = make_domain(*domain)
    z = np.array(coords[: dom.dim], complex)
    assert minkowski(dom, lam * z) == pytest.approx(abs(lam) * minkowski(dom, z), rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("kind,params", BALANCED)
def test_balancedness_check(kind, params):
    rep = balancedness_check(make_domain(kind, params), samples=300, seed=1)
    assert rep["max_deviation"] <= 1e-9
    assert rep["membership_failures"] == 0


def test_membership_exact_removed_set():
    d = make_domain("example9")
    assert not d.contains(np.array([0.5, 0.5]))
    assert d.contains(np.array([0.5, 0.5 + 1e-15j]))
    assert d.contains(np.array([0.49, 0.49]))
    thick = make_domain("example9", {"eps": 1e-3})
    assert not thick.contains(np.array([0.5, 0.5 + 1e-4]))
    assert not make_domain("example9_n", {"n": 3}).contains(np.array([0.6, 0.6, 0.6]))


def test_removed_set_mobius_graph():
    rs = RemovedSet("mobius_graph", b=0.5)
    s = 0.7
    z1 = (s - 0.5) / (1 - 0.5 * s)
    assert rs.contains(np.array([z1, s]))
    assert not rs.contains(np.array([z1, 0.3]))
    with pytest.raises(ValueError):
        RemovedSet("other")


def test_monomial_gauge_zero_and_unbounded():
    dom = make_domain("example7")
    assert minkowski(dom, (0, 5.0)) == 0.0
    assert bisect_gauge(dom, (0, 5.0)).value == 0.0
    g = monomial_gauge(((1, 0), (0, 1)))
    assert g(np.array([[0.5, -0.7j]]))[0] == pytest.approx(0.7)


def test_non_balanced_has_no_gauge():
    dom = make_domain("example9_mobius", {"b": 0.5})
    with pytest.raises(ValueError):
        minkowski(dom, (0.1, 0.1))


def test_hull_convex_exact_and_monotone():
    ball = make_domain("ball", {"n": 2})
    r = hull_minkowski(ball, (0.3, 0.4))
    assert r.value == pytest.approx(0.5)
    assert r.bound.kind.value == "Exact"
    budget = OptimizerBudget(restarts=4, max_iterations=400)
    ex10 = make_domain("example10", {"a": 0.8})
    vals = [hull_minkowski(ex10, (0, 0.5), k, budget).value for k in (1, 2, 3)]
    assert vals[0] == pytest.approx(0.625)
    assert vals[0] >= vals[1] >= vals[2]
    assert vals[-1] <= 0.505
    assert subadditivity_gap(ex10, (0, 0.5), budget) > 0.1


def test_hull_example9_and_example7():
    budget = OptimizerBudget(restarts=4, max_iterations=400)
    assert hull_minkowski(make_domain("example9"), (0.3, 0.3), budget=budget).value <= 0.3 + 1e-6
    assert hull_minkowski(make_domain("example7"), (0.5, 1.2), budget=budget).value <= 0.5 + 5e-3


def test_probe_finds_example10_violation_only():
    assert len(pseudoconvexity_probe(make_domain("example10", {"a": 0.8})).violations) >= 1
    for kind, params in [("ball", {"n": 2}), ("polydisc", {"n": 2}), ("example7", {})]:
        assert pseudoconvexity_probe(make_domain(kind, params)).violations == []


def test_describe_and_flags():
    d = make_domain("example7").describe()
    assert d["pseudoconvex"] == "Yes" and d["bounded"] is False
    assert make_domain("example10", {"a": 0.8}).pseudoconvex is Pseudoconvex.NO
    assert not make_domain("example9_mobius", {"b": 0.3}).balanced


def test_sample_inside_respects_range():
    dom = make_domain("ball", {"n": 3})
    pts = sample_inside(dom, np.random.default_rng(0), 50, h_max=0.5, h_min=0.2)
    h = [minkowski(dom, p) for p in pts]
    assert min(h) >= 0.2 - 1e-12 and max(h) < 0.5
    assert math.isfinite(sum(h))
