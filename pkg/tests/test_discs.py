import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from balanced_invariants.discs import (
    COMPETITOR_RHO,
    DegenerateInterpolation,
    catalog_competitors,
    containment_margin,
    disc_eval,
    ex9,
    ex9_alpha,
    ex10,
    interpolating_disc,
    make_grid,
    polynomial_coefficients,
    polynomial_disc,
    remark_a,
    remark_b,
    removed_set_margin,
    two_node_coefficients,
)
from balanced_invariants.domains import make_domain

from oracles import remark_mu

small = st.complex_numbers(max_magnitude=0.9, allow_nan=False, allow_infinity=False)


def test_polynomial_eval_and_coefficients():
    c = np.array([[0, 1], [1, 0], [0, 0.5j]])
    d = polynomial_disc(c)
    lam = 0.3 - 0.2j
    np.testing.assert_allclose(d(lam), [lam, 1 + 0.5j * lam ** 2])
    np.testing.assert_allclose(polynomial_coefficients(d), c)
    assert d(np.zeros((4, 5))).shape == (4, 5, 2)
    with pytest.raises(ValueError):
        disc_eval(d, 1.0)
    with pytest.raises(ValueError):
        polynomial_disc(np.ones((1, 2)))


@settings(max_examples=50)
@given(st.lists(small, min_size=2, max_size=2), st.lists(small, min_size=2, max_size=2),
       st.complex_numbers(min_magnitude=0.05, max_magnitude=0.9), st.lists(small, min_size=4, max_size=4))
def test_interpolation_hits_endpoints(z, w, alpha, free):
    d = interpolating_disc(z, w, alpha, 3, np.reshape(free, (2, 2)))
    np.testing.assert_allclose(d(0), z, atol=1e-12)
    np.testing.assert_allclose(d(alpha), w, atol=1e-9)


def test_interpolation_degenerate():
    with pytest.raises(DegenerateInterpolation):
        interpolating_disc((0, 0), (0.1, 0.1), 0.0)
    with pytest.raises(DegenerateInterpolation):
        two_node_coefficients(np.zeros(2), np.ones(2), 0.3, 0.3, np.zeros((0, 2)))


@settings(max_examples=50)
@given(small, small, st.lists(small, min_size=6, max_size=6))
def test_two_node_hits_both_nodes(u, v, free):
    if abs(u - v) < 1e-3:
        return
    z, w = np.array([0.1, 0.2j]), np.array([-0.3, 0.4])
    d = polynomial_disc(two_node_coefficients(z, w, u, v, np.reshape(free, (3, 2))))
    np.testing.assert_allclose(d(u), z, atol=1e-8)
    np.testing.assert_allclose(d(v), w, atol=1e-8)


def test_rescaled():
    d = polynomial_disc([[0, 0], [1, 2], [0.5, 0]])
    r = d.rescaled(0.5)
    np.testing.assert_allclose(r(0.4), d(0.2))


def test_grid_shape():
    g = make_grid(0.9, 12, 256)
    assert g.points.size == 1 + 11 * 64 + 256
    assert np.max(np.abs(g.points)) == pytest.approx(0.9)
    with pytest.raises(ValueError):
        make_grid(0.9, 12, 32)


@pytest.mark.parametrize("t", [0.2, 0.3, 0.45, 0.3j, -0.1 + 0.2j])
@pytest.mark.parametrize("r", [0.9, 0.98])
def test_ex9_competitor_passes_through_and_is_admissible(t, r):
    alpha = ex9_alpha(t, r)
    d = ex9(r, alpha)
    np.testing.assert_allclose(d(t / r), [t, t], atol=1e-12)
    assert containment_margin(make_domain("example9"), d, COMPETITOR_RHO) > 0


def test_ex9_alpha_frozen():
    # frozen from an mpmath root of (l0 - a) / (1 - a l0) = r, l0 = 0.3/0.98
    assert ex9_alpha(0.3, 0.98).real == pytest.approx(-0.96268221574344023, abs=1e-12)


def test_ex10_competitor():
    d = ex10(0.5)
    np.testing.assert_allclose(d(0.5), [0, 0.5], atol=1e-15)
    assert containment_margin(make_domain("example10", {"a": 0.8}), d, COMPETITOR_RHO) > 0
    phased = ex10(0.5, 1j)
    np.testing.assert_allclose(phased(0.5), [0, 0.5j], atol=1e-15)


def test_remark_a_competitor():
    d = remark_a(0.5, 0.2)
    np.testing.assert_allclose(d(0.5), [0.5, 0.2])
    assert containment_margin(make_domain("example9"), d, COMPETITOR_RHO) > 0


@pytest.mark.parametrize("b,admissible", [(0.7, True), (0.75, True), (0.79, True), (0.81, False), (0.9, False)])
def test_remark_b_threshold(b, admissible):
    dom = make_domain("example9_mobius", {"b": b})
    m = containment_margin(dom, remark_b(b), COMPETITOR_RHO)
    assert (m > 0) is admissible
    if not admissible:
        assert m == pytest.approx(-(remark_mu(b) - 0.5), abs=1e-9)


def test_removed_set_exact_intersection():
    dom = make_domain("example9")
    # (lam, lam^2 + lam - 0.25) meets the diagonal where lam^2 = 1/4 with |lam| = 1/2: touching only
    d = polynomial_disc([[0, -0.25], [1, 1], [0, 1]])
    assert removed_set_margin(dom.removed, d, 0.9) <= 0
    # a straight diagonal disc of radius 0.4 stays inside the hole-free part
    straight = polynomial_disc([[0, 0], [0.4, 0.4]])
    assert removed_set_margin(dom.removed, straight, 0.99) == np.inf
    big = polynomial_disc([[0, 0], [0.7, 0.7]])
    assert removed_set_margin(dom.removed, big, 0.99) < 0


def test_catalog_competitors_selection():
    d9 = make_domain("example9")
    names = {d.name for d, _ in catalog_competitors(d9, np.zeros(2), np.array([0.3, 0.3]))}
    assert names == {"ex9"}
    assert catalog_competitors(d9, np.array([0.1, 0]), np.array([0.3, 0.3])) == []
    d10 = make_domain("example10", {"a": 0.8})
    (disc, alpha), = catalog_competitors(d10, np.zeros(2), np.array([0, 0.5j]))
    np.testing.assert_allclose(disc(alpha), [0, 0.5j], atol=1e-14)
    swapped = catalog_competitors(d9, np.zeros(2), np.array([0.2, 0.5]))
    disc, alpha = swapped[0]
    np.testing.assert_allclose(disc(alpha), [0.2, 0.5], atol=1e-14)


def test_to_dict():
    assert ex10(0.5).to_dict()["name"] == "ex10"
    assert "coefficients" in polynomial_disc([[0, 0], [1, 1]]).to_dict()
