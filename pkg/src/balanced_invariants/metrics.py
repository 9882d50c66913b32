"""Bounds on invariant functions: Lempert and m-th Lempert functions, Kobayashi-Royden
metric, Caratheodory distance from the origin.

Disc-based quantities are upper bounds, function-based ones lower bounds.
Upper bounds come from discs admissible on ``|lam| <= rho``; the rescaled disc
``phi(rho lam)`` is then admissible on the unit disc, so reported node
distances are computed at ``u / rho`` and ``v / rho``.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .core import Bound, BoundKind, HyperbolicValue, as_point, complex_to_json, poincare_star
from .discs import (
    COMPETITOR_RHO,
    AnalyticDisc,
    DegenerateInterpolation,
    DiscCertificate,
    catalog_competitors,
    containment_margin,
    make_grid,
    polynomial_disc,
    removed_set_margin,
    two_node_coefficients,
)
from .domains import DomainSpec, Pseudoconvex, minkowski
from .optim import BestTracker, OptimizerBudget, complex_to_real, nelder_mead, real_to_complex, restart_rng


class UnsupportedDomain(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class LempertResult:
    value: HyperbolicValue
    certificate: DiscCertificate | None
    source: str
    failed: bool = False

    def to_dict(self) -> dict:
        return {**self.value.to_dict(), "source": self.source, "failed": self.failed,
                "certificate": None if self.certificate is None else self.certificate.to_dict()}


@dataclass(frozen=True, eq=False)
class ChainCertificate:
    points: tuple[np.ndarray, ...]
    links: tuple[LempertResult, ...]

    @property
    def total(self) -> float:
        return sum(link.value.distance for link in self.links)

    def to_dict(self) -> dict:
        return {"points": [complex_to_json(p) for p in self.points],
                "links": [link.to_dict() for link in self.links], "total_distance": self.total}


@dataclass(frozen=True, eq=False)
class ChainResult:
    value: HyperbolicValue
    chain: ChainCertificate

    @property
    def m(self) -> int:
        return len(self.chain.links)

    def to_dict(self) -> dict:
        return {**self.value.to_dict(), "m": self.m, "chain": self.chain.to_dict()}


@dataclass(frozen=True, eq=False)
class MetricResult:
    bound: Bound
    certificate: DiscCertificate | None
    source: str

    @property
    def value(self) -> float:
        return self.bound.value

    def to_dict(self) -> dict:
        return {**self.bound.to_dict(), "source": self.source,
                "certificate": None if self.certificate is None else self.certificate.to_dict()}


@dataclass(frozen=True)
class MonomialCandidate:
    beta: tuple[int, ...]
    normalizer: float = 1.0

    @property
    def admissible(self) -> bool:
        return self.normalizer <= 1.0


@dataclass(frozen=True, eq=False)
class CaratheodoryResult:
    value: HyperbolicValue
    best: MonomialCandidate | None
    admissible_count: int = 0
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {**self.value.to_dict(), "beta": None if self.best is None else list(self.best.beta),
                "admissible_checked": self.admissible_count}


# ---------------------------------------------------------------------------
# helpers

def _require_inside(domain: DomainSpec, p: np.ndarray, label: str) -> None:
    if not domain.strictly_inside(p):
        raise ValueError(f"{label}={p.tolist()} is not strictly inside {domain.name}")


def _canonical_key(p: np.ndarray) -> tuple:
    return (float(np.linalg.norm(p)), tuple(p.real), tuple(p.imag))


@functools.lru_cache(maxsize=64)
def _vandermonde(rho: float, radii: int, angles: int, inner: int, degree: int) -> np.ndarray:
    pts = make_grid(rho, radii, angles, inner).points
    return pts[:, None] ** np.arange(degree + 1)


class _GridChecker:
    """Fast containment margin for polynomial coefficient tables on a fixed grid.

    ``coarse`` selects a thinner grid used while searching; every reported
    disc is re-checked on the full budget grid by :func:`_certify_nodes`.
    """

    def __init__(self, domain: DomainSpec, budget: OptimizerBudget, degree: int, coarse: bool = False):
        self.domain = domain
        self.rho = budget.rho
        if coarse:
            shape = (min(budget.radii, 6), min(budget.angles, 128), 32)
        else:
            shape = (budget.radii, budget.angles, 64)
        self.V = _vandermonde(budget.rho, *shape, degree)

    def margin(self, coeffs: np.ndarray) -> float:
        vals = self.V[:, : coeffs.shape[0]] @ coeffs
        m = 1.0 - float(np.max(self.domain.containment_gauge(vals)))
        if m > 0 and self.domain.removed is not None:
            disc = polynomial_disc(coeffs)
            m = min(m, removed_set_margin(self.domain.removed, disc, self.rho))
            if self.domain.removed.eps > 0 and np.any(self.domain.removed.contains(vals)):
                m = -self.domain.removed.eps
        return m


def _certificate(domain, disc, budget, rho=None, nodes=None, note="") -> DiscCertificate:
    rho = budget.rho if rho is None else rho
    margin = containment_margin(domain, disc, rho, budget.radii, budget.angles)
    return DiscCertificate(disc, rho, margin, {"radii": budget.radii, "angles": budget.angles},
                           nodes, note)


def _certify_nodes(domain, disc, u, v, budget, iterations=40):
    """Certify a two-node disc on the full grid, shrinking the radius if needed.

    Shrinking the certified radius only shrinks the image, so the largest
    admissible radius ``r`` in ``(max(|u|,|v|), rho]`` is found by bisection
    and the value is the node distance at ``u / r``, ``v / r``.  Returns
    ``(starred value, certificate)`` or ``None``.
    """
    cert = _certificate(domain, disc, budget, nodes=(u, v))
    if cert.margin > budget.margin:
        return poincare_star(u / budget.rho, v / budget.rho), cert
    reach = max(abs(u), abs(v))
    lo, hi = reach * (1 + 1e-6), budget.rho
    if lo >= hi:
        return None
    best = _certificate(domain, disc, budget, rho=lo, nodes=(u, v))
    if best.margin <= budget.margin:
        return None
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        c = _certificate(domain, disc, budget, rho=mid, nodes=(u, v))
        if c.margin > budget.margin:
            lo, best = mid, c
        else:
            hi = mid
    note = "radius reduced to pass the full grid"
    best = DiscCertificate(best.disc, best.rho, best.margin, best.grid, best.nodes, note)
    return poincare_star(u / lo, v / lo), best


def _certify_radius(domain, disc, budget, iterations=40):
    """Largest radius in ``(0, rho]`` on which ``disc`` passes the full grid, with its certificate."""
    cert = _certificate(domain, disc, budget)
    if cert.margin > budget.margin:
        return budget.rho, cert
    lo, hi, best = 0.0, budget.rho, None
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        c = _certificate(domain, disc, budget, rho=mid)
        if c.margin > budget.margin:
            lo, best = mid, c
        else:
            hi = mid
    if best is None:
        return None
    return lo, DiscCertificate(best.disc, best.rho, best.margin, best.grid, None,
                               "radius reduced to pass the full grid")


def _straight_disc(w: np.ndarray, h: float) -> AnalyticDisc:
    return polynomial_disc(np.vstack([np.zeros_like(w), w / h]))


# ---------------------------------------------------------------------------
# Lempert function

def _affine_candidates(domain, z, w, budget, checker, iterations=40):
    """Best affine discs with centre at z, at w and at the midpoint.

    For a fixed centre the image discs are nested in the node scale tau, so
    admissibility is monotone and bisection finds the smallest tau.
    """
    out = []
    rho = budget.rho
    diff = w - z
    for zeta in (0.0, 1.0, 0.5):
        centre = z + zeta * diff
        reach = max(zeta, 1.0 - zeta)
        hi = rho / reach * (1 - 1e-9)

        def ok(tau):
            coeffs = np.vstack([centre, diff / tau])
            return checker.margin(coeffs) > budget.margin

        if not ok(hi):
            continue
        lo = 0.0
        for _ in range(iterations):
            mid = 0.5 * (lo + hi)
            if ok(mid):
                hi = mid
            else:
                lo = mid
        u, v = -zeta * hi, (1 - zeta) * hi
        out.append((poincare_star(u / rho, v / rho), u, v))
    out.sort(key=lambda t: t[0])
    return out


def _degree_stages(degree: int) -> list[int]:
    return [d for d in (2, 4) if d < degree] + [degree]


def _optimize_discs(domain, z, w, budget, seeds):
    """Multi-start Nelder-Mead over nodes and free coefficients of two-node polynomial discs.

    Node positions are first refined among affine discs.  Each restart then
    climbs through increasing degrees, warm-starting every stage from the
    previous one; odd restarts instead polish the incumbent at full degree.
    The search runs on a coarse grid.  Returns ``[(u, v, free)]`` candidates
    (best first) for full-grid certification.
    """
    rho = budget.rho
    n = z.size
    deg = budget.degree
    checker = _GridChecker(domain, budget, max(deg, 1), coarse=True)
    node_cap = rho * (1 - 1e-9)

    def unpack(x, degree):
        u, v = x[0] + 1j * x[1], x[2] + 1j * x[3]
        free = real_to_complex(x[4:]).reshape(degree - 1, n) if degree > 1 else np.zeros((0, n), complex)
        return u, v, free

    def make_objective(degree):
        def objective(x):
            u, v, free = unpack(x, degree)
            reach = max(abs(u), abs(v))
            if reach >= node_cap:
                return math.inf, False, 10.0 + reach
            try:
                coeffs = two_node_coefficients(z, w, u, v, free)
            except DegenerateInterpolation:
                return math.inf, False, 10.0
            value = poincare_star(u / rho, v / rho)
            margin = checker.margin(coeffs)
            feasible = margin > budget.margin
            return value, feasible, value if feasible else 1.0 + value + 10.0 * (budget.margin - margin)
        return objective

    def pad(x, degree):
        return np.concatenate([x, np.zeros(2 * n * (degree - 1) - (x.size - 4))])

    per_stage = max(50, budget.max_iterations // 2)
    affine = BestTracker(make_objective(1))
    for _, u, v in seeds:
        u, v = complex(u), complex(v)
        x0 = np.array([u.real, u.imag, v.real, v.imag])
        affine.offer(x0)
        nelder_mead(affine, x0, 0.02, per_stage)
    if affine.best_x is None:
        return []
    nodes = affine.best_x.copy()
    found = [(affine.best_value, unpack(nodes, 1))]
    if deg == 1:
        return [f[1] for f in found]

    stages = _degree_stages(deg)
    objectives = {d: make_objective(d) for d in stages}
    iters = max(50, budget.max_iterations // len(stages))
    incumbent = (affine.best_value, pad(nodes, deg))

    def run(d, x0, step):
        nonlocal incumbent
        tr = BestTracker(objectives[d])
        tr.offer(x0)
        nelder_mead(tr, x0, step, iters)
        if tr.best_x is None:
            return None
        found.append((tr.best_value, unpack(tr.best_x, d)))
        if d == deg and tr.best_value < incumbent[0]:
            incumbent = (tr.best_value, tr.best_x)
        return tr.best_x

    for r in range(budget.restarts):
        rng = restart_rng(budget.seed, r)
        if r % 2 == 1:
            xb = incumbent[1]
            scale = 0.01 * (1 + (r // 2) % 4)
            weights = np.r_[np.full(4, 0.25), np.ones(xb.size - 4)]
            run(deg, xb + scale * weights * rng.normal(size=xb.size), 0.01)
            continue
        x = nodes + (0.0 if r == 0 else 0.05 * rng.normal(size=4))
        if max(abs(x[0] + 1j * x[1]), abs(x[2] + 1j * x[3])) >= node_cap:
            x = nodes.copy()
        for d in stages:
            x0 = pad(x, d)
            if r > 0:
                x0[x.size:] += 0.05 * rng.normal(size=x0.size - x.size)
            out = run(d, x0, 0.02)
            x = out if out is not None else x0
    found.sort(key=lambda f: f[0])
    return [f[1] for f in found]


def lempert_upper(domain: DomainSpec, z, w, budget: OptimizerBudget | None = None, *,
                  shortcut: bool = True, fast: bool = False) -> LempertResult:
    """Upper bound for the starred Lempert function between z and w.

    Candidates: the pseudoconvex balanced identity at the origin (exact,
    when ``shortcut``), the straight disc at the origin of a balanced
    domain, catalog competitors, best affine discs, and (unless ``fast``)
    a multi-start search over two-node polynomial discs of
    ``budget.degree``.  The least certified value wins.  The search is
    skipped when a cheaper candidate is already within ``1e-6`` of the
    lower bound inherited from the unit polydisc.
    """
    budget = budget or OptimizerBudget()
    z = as_point(z, domain.dim)
    w = as_point(w, domain.dim)
    _require_inside(domain, z, "z")
    _require_inside(domain, w, "w")
    swapped = _canonical_key(w) < _canonical_key(z)
    if swapped:
        z, w = w, z
    result = _lempert_canonical(domain, z, w, budget, shortcut, fast)
    if swapped and result.certificate is not None and result.certificate.nodes is not None:
        c = result.certificate
        flipped = DiscCertificate(c.disc, c.rho, c.margin, c.grid, c.nodes[::-1], c.note)
        result = LempertResult(result.value, flipped, result.source, result.failed)
    return result


_OPTIMAL_GAP = 1e-6


def _polydisc_lower(domain, z, w) -> float:
    """Lower bound from the unit polydisc when the domain lies inside it, else 0."""
    if not domain.in_unit_polydisc:
        return 0.0
    return max(poincare_star(complex(a), complex(b)) for a, b in zip(z, w))


def _lempert_canonical(domain, z, w, budget, shortcut, fast) -> LempertResult:
    if np.array_equal(z, w):
        return LempertResult(HyperbolicValue(0.0, BoundKind.EXACT), None, "identical points")
    candidates: list[tuple[float, str, DiscCertificate | None]] = []
    if domain.balanced and not np.any(z):
        h = minkowski(domain, w)
        if h == 0.0:
            kind = BoundKind.EXACT if shortcut else BoundKind.UPPER
            return LempertResult(HyperbolicValue(0.0, kind), None, "complex line inside domain")
        cert = DiscCertificate(_straight_disc(w, h), 1.0, math.nan, {}, (0j, complex(h)),
                               "admissible on the whole disc by balancedness")
        if shortcut and domain.pseudoconvex is Pseudoconvex.YES:
            return LempertResult(HyperbolicValue(h, BoundKind.EXACT), cert, "pseudoconvex balanced identity")
        candidates.append((h, "straight disc", cert))
    for disc, alpha in catalog_competitors(domain, z, w):
        if abs(alpha) >= COMPETITOR_RHO:
            continue
        cert = _certificate(domain, disc, budget, COMPETITOR_RHO, (0j, alpha))
        if cert.margin > budget.margin:
            candidates.append((abs(alpha) / COMPETITOR_RHO, f"competitor {disc.name}", cert))
    checker = _GridChecker(domain, budget, 1)
    affine = _affine_candidates(domain, z, w, budget, checker)
    for value, u, v in affine[:1]:
        disc = polynomial_disc(two_node_coefficients(z, w, complex(u), complex(v), np.zeros((0, z.size))))
        candidates.append((value, "affine disc", _certificate(domain, disc, budget, nodes=(complex(u), complex(v)))))
    lower = _polydisc_lower(domain, z, w)
    settled = bool(candidates) and min(c[0] for c in candidates) <= lower + _OPTIMAL_GAP
    if not fast and affine and not settled:
        for u, v, free in _optimize_discs(domain, z, w, budget, affine)[:3]:
            disc = polynomial_disc(two_node_coefficients(z, w, u, v, free))
            certified = _certify_nodes(domain, disc, u, v, budget)
            if certified is not None:
                candidates.append((certified[0], f"optimizer degree {free.shape[0] + 1}", certified[1]))
    if not candidates:
        return LempertResult(HyperbolicValue(1.0, BoundKind.UPPER), None, "no admissible disc found", failed=True)
    value, source, cert = min(candidates, key=lambda c: c[0])
    return LempertResult(HyperbolicValue(min(value, 1.0), BoundKind.UPPER), cert, source)


# ---------------------------------------------------------------------------
# m-th Lempert function and Kobayashi pseudodistance

def _subset_point(z, w, subset):
    p = z.copy()
    idx = list(subset)
    p[idx] = w[idx]
    return p


def _waypoint_seeds(domain, z, w, m, prev: ChainCertificate) -> list[list[np.ndarray]]:
    n = z.size
    seeds = [[z + (j / m) * (w - z) for j in range(1, m)]]
    seeds.append([0.5 * (z + (j / m) * (w - z)) for j in range(1, m)])
    # coordinate projections: partial moves of coordinates from z to w
    subsets = [s for k in range(1, n) for s in itertools.combinations(range(n), k)]
    levels = [tuple()] + subsets + [tuple(range(n))]
    for combo in itertools.combinations_with_replacement(range(len(levels)), m - 1):
        sets = [set(levels[i]) for i in combo]
        if all(a <= b for a, b in zip(sets, sets[1:])) and any(0 < len(s) < n for s in sets):
            seeds.append([_subset_point(z, w, levels[i]) for i in combo])
        if len(seeds) > 64:
            break
    seeds.append(list(prev.points[1:-1]) + [w.copy()])
    return seeds


def _link_cache(domain, budget, shortcut, fast):
    cache = {}

    def link(a, b):
        key = (a.tobytes(), b.tobytes())
        if key not in cache:
            cache[key] = lempert_upper(domain, a, b, budget, shortcut=shortcut, fast=fast)
        return cache[key]

    return link


def _chain_cost(domain, link, points) -> float:
    for p in points[1:-1]:
        if not domain.strictly_inside(p):
            return math.inf
    total = 0.0
    for a, b in zip(points, points[1:]):
        r = link(a, b)
        if r.failed:
            return math.inf
        total += r.value.distance
    return total


def _chain_settled(domain, z, w, value: HyperbolicValue) -> bool:
    """True when no chain can improve ``value`` by more than the optimality gap.

    Chains are bounded below by the Kobayashi distance, which equals the
    Lempert function on convex domains and dominates the polydisc distance
    on domains inside the unit polydisc.
    """
    if value.kind is BoundKind.EXACT and domain.convex:
        return True
    return domain.in_unit_polydisc and value.starred <= _polydisc_lower(domain, z, w) + _OPTIMAL_GAP


def _m_lempert(domain, z, w, m, budget, shortcut, links=None) -> ChainResult:
    if links is None:
        links = (_link_cache(domain, budget, shortcut, False), _link_cache(domain, budget, shortcut, True))
    full_link, cheap_link = links
    if m == 1:
        r = full_link(z, w)
        return ChainResult(r.value, ChainCertificate((z, w), (r,)))
    prev = _m_lempert(domain, z, w, m - 1, budget, shortcut, links)
    zero = LempertResult(HyperbolicValue(0.0, BoundKind.EXACT), None, "identical points")
    padded = ChainCertificate(prev.chain.points + (w,), prev.chain.links + (zero,))
    if _chain_settled(domain, z, w, prev.value):
        return ChainResult(HyperbolicValue(prev.value.starred, BoundKind.UPPER), padded)

    seeds = _waypoint_seeds(domain, z, w, m, prev.chain)
    scored = []
    for s in seeds:
        pts = [z, *s, w]
        scored.append((_chain_cost(domain, cheap_link, pts), len(scored), s))
    scored.sort(key=lambda t: (t[0], t[1]))

    n = z.size
    tracker = BestTracker(lambda x: _cost_triple(domain, cheap_link, z, w, x, m, n))
    for cost, _, s in scored[:2]:
        if not math.isfinite(cost):
            continue
        x0 = complex_to_real(np.concatenate(s))
        tracker.offer(x0)
        scale = 0.05 * float(np.linalg.norm(w - z)) + 1e-3
        nelder_mead(tracker, x0, scale, max(50, budget.max_iterations // 10))
    if tracker.best_x is None:
        return ChainResult(HyperbolicValue.from_distance(padded.total, BoundKind.UPPER), padded)
    way = real_to_complex(tracker.best_x).reshape(m - 1, n)
    pts = (z, *way, w)
    chain_links = tuple(full_link(a, b) for a, b in zip(pts, pts[1:]))
    chain = ChainCertificate(pts, chain_links)
    if any(link.failed for link in chain_links) or chain.total >= padded.total:
        chain = padded
    return ChainResult(HyperbolicValue.from_distance(chain.total, BoundKind.UPPER), chain)


def _cost_triple(domain, link, z, w, x, m, n):
    way = real_to_complex(x).reshape(m - 1, n)
    cost = _chain_cost(domain, link, [z, *way, w])
    ok = math.isfinite(cost)
    return cost, ok, cost if ok else 1e6


def m_lempert_upper(domain: DomainSpec, z, w, m: int, budget: OptimizerBudget | None = None, *,
                    shortcut: bool = True) -> ChainResult:
    """Upper bound for the m-th Lempert function by optimizing chain waypoints.

    Waypoints are searched with cheap link bounds, then the best chain's
    links are recomputed with the full disc search.  Chains of length m-1
    embed (by repeating the endpoint), so the value is nonincreasing in m.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    budget = budget or OptimizerBudget()
    z = as_point(z, domain.dim)
    w = as_point(w, domain.dim)
    _require_inside(domain, z, "z")
    _require_inside(domain, w, "w")
    swapped = _canonical_key(w) < _canonical_key(z)
    if swapped:
        z, w = w, z
    res = _m_lempert(domain, z, w, m, budget, shortcut)
    if swapped:
        chain = ChainCertificate(res.chain.points[::-1], res.chain.links[::-1])
        res = ChainResult(res.value, chain)
    return res


def kobayashi_upper(domain: DomainSpec, z, w, m_max: int, budget: OptimizerBudget | None = None, *,
                    shortcut: bool = True) -> ChainResult:
    """Least m-th Lempert bound over m <= m_max."""
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    return m_lempert_upper(domain, z, w, m_max, budget, shortcut=shortcut)


# ---------------------------------------------------------------------------
# Kobayashi-Royden metric

def _affine_gamma(domain, z, v, budget, checker, iterations=50):
    def ok(gamma):
        return checker.margin(np.vstack([z, v / gamma])) > budget.margin

    hi = float(np.linalg.norm(v))
    for _ in range(200):
        if ok(hi):
            break
        hi *= 2.0
    else:
        return None
    lo = 0.0
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def kr_upper(domain: DomainSpec, z, v, budget: OptimizerBudget | None = None, *,
             shortcut: bool = True, fast: bool = False) -> MetricResult:
    """Upper bound for the Kobayashi-Royden metric at z in direction v.

    Minimizes gamma over discs with ``phi(0) = z`` and ``phi'(0) = v / gamma``;
    gamma is searched in log scale.
    """
    budget = budget or OptimizerBudget()
    z = as_point(z, domain.dim)
    v = as_point(v, domain.dim)
    _require_inside(domain, z, "z")
    if not np.any(v):
        raise ValueError("direction v must be nonzero")
    n = z.size
    candidates = []
    if domain.balanced and not np.any(z):
        h = minkowski(domain, v)
        if h == 0.0:
            kind = BoundKind.EXACT if shortcut else BoundKind.UPPER
            return MetricResult(Bound(0.0, kind), None, "complex line inside domain")
        cert = DiscCertificate(_straight_disc(v, h), 1.0, math.nan, {}, None,
                               "admissible on the whole disc by balancedness")
        if shortcut and domain.pseudoconvex is Pseudoconvex.YES:
            return MetricResult(Bound(h, BoundKind.EXACT), cert, "pseudoconvex balanced identity")
        candidates.append((h, "straight disc", cert))
    rho = budget.rho
    if candidates:
        # at the origin of a balanced domain the best affine disc is the straight one
        gamma0 = candidates[0][0] * rho
    else:
        gamma0 = _affine_gamma(domain, z, v, budget, _GridChecker(domain, budget, 1))
    if gamma0 is not None and not candidates:
        disc = polynomial_disc(np.vstack([z, v / gamma0]))
        candidates.append((gamma0 / rho, "affine disc", _certificate(domain, disc, budget)))
    if not fast and gamma0 is not None and budget.degree > 1:
        deg = budget.degree
        nfree = 2 * n * (deg - 1)
        coarse = _GridChecker(domain, budget, deg, coarse=True)

        def objective(x):
            gamma = math.exp(x[0])
            free = real_to_complex(x[1:]).reshape(deg - 1, n)
            margin = coarse.margin(np.vstack([z, v / gamma, free]))
            feasible = margin > budget.margin
            val = gamma / rho
            return val, feasible, val if feasible else 2.0 * val + 10.0 * (budget.margin - margin) + 1.0

        tracker = BestTracker(objective)
        for r in range(budget.restarts):
            rng = restart_rng(budget.seed, 31337, r)
            if r % 2 == 1 and tracker.best_x is not None:
                x0 = tracker.best_x + 0.01 * (1 + (r // 2) % 4) * np.r_[0.25, np.ones(nfree)] * rng.normal(size=nfree + 1)
            else:
                free0 = np.zeros(nfree) if r == 0 else 0.05 * (r % 4 + 1) * rng.normal(size=nfree)
                x0 = np.concatenate([[math.log(gamma0)], free0])
            tracker.offer(x0)
            nelder_mead(tracker, x0, np.concatenate([[0.05], np.full(nfree, 0.02)]), budget.max_iterations)
        if tracker.best_x is not None:
            x = tracker.best_x
            gamma = math.exp(x[0])
            disc = polynomial_disc(np.vstack([z, v / gamma, real_to_complex(x[1:]).reshape(deg - 1, n)]))
            certified = _certify_radius(domain, disc, budget)
            if certified is not None:
                r_ok, cert = certified
                candidates.append((gamma / r_ok, f"optimizer degree {deg}", cert))
    if not candidates:
        return MetricResult(Bound(math.inf, BoundKind.UPPER), None, "no admissible disc found")
    value, source, cert = min(candidates, key=lambda c: c[0])
    return MetricResult(Bound(value, BoundKind.UPPER), cert, source)


def kr2_upper(domain: DomainSpec, a, budget: OptimizerBudget | None = None, *,
              shortcut: bool = True) -> MetricResult:
    """Upper bound for inf{kappa(0; a1) + kappa(0; a2) : a1 + a2 = a} at the origin."""
    budget = budget or OptimizerBudget()
    a = as_point(a, domain.dim)
    n = a.size
    zero = np.zeros(n, complex)

    @functools.lru_cache(maxsize=None)
    def cheap(key):
        v = np.frombuffer(key, dtype=complex)
        if not np.any(v):
            return 0.0
        return kr_upper(domain, zero, v, budget, shortcut=shortcut, fast=True).value

    def objective(x):
        a1 = real_to_complex(x)
        val = cheap(a1.tobytes()) + cheap((a - a1).tobytes())
        return val, math.isfinite(val), val if math.isfinite(val) else 1e6

    tracker = BestTracker(objective)
    seeds = [a.copy(), 0.5 * a]
    for i in range(n):
        if a[i] != 0 and np.count_nonzero(a) > 1:
            e = np.zeros(n, complex)
            e[i] = a[i]
            seeds.append(e)
    rng = restart_rng(budget.seed, 271828)
    scale = float(np.linalg.norm(a)) + 1e-12
    while len(seeds) < min(budget.restarts, 16):
        seeds.append(0.5 * a + 0.5 * scale * (rng.normal(size=n) + 1j * rng.normal(size=n)) / math.sqrt(2 * n))
    for s in seeds:
        x0 = complex_to_real(s)
        tracker.offer(x0)
        nelder_mead(tracker, x0, 0.1 * scale, budget.max_iterations // 4)
    a1 = real_to_complex(tracker.best_x)
    best = tracker.best_value
    parts = [p for p in (a1, a - a1) if np.any(p)]
    refined = sum(kr_upper(domain, zero, p, budget, shortcut=shortcut).value for p in parts)
    best = min(best, refined)
    return MetricResult(Bound(best, BoundKind.UPPER), None, f"split a1={complex_to_json(a1)}")


# ---------------------------------------------------------------------------
# Caratheodory lower bound

def _cross(p, q) -> int:
    return int(p[0]) * int(q[1]) - int(p[1]) * int(q[0])


def cone_contains(generators, beta) -> bool:
    """Exact test whether beta is a nonnegative combination of the generators.

    Orthant cones and planar cones are decided in integer arithmetic; other
    cones by linear feasibility.
    """
    gens = [tuple(int(x) for x in g) for g in generators]
    beta = tuple(int(x) for x in beta)
    n = len(beta)
    if any(b < 0 for b in beta):
        return False
    units = {tuple(int(i == j) for j in range(n)) for i in range(n)}
    if units <= set(gens):
        return True
    if n == 2:
        lo = hi = gens[0]
        for g in gens[1:]:
            if _cross(g, lo) > 0:
                lo = g
            if _cross(hi, g) > 0:
                hi = g
        return _cross(lo, beta) >= 0 and _cross(beta, hi) >= 0
    res = linprog(np.zeros(len(gens)), A_eq=np.array(gens, float).T, b_eq=np.array(beta, float),
                  bounds=[(0, None)] * len(gens), method="highs")
    return res.status == 0


def caratheodory_monomial_lower(domain: DomainSpec, w, exponent_budget: int = 64) -> CaratheodoryResult:
    """Lower bound for the starred Caratheodory distance from 0 on a monomial Reinhardt domain.

    Every beta with ``sup_D |z^beta| <= 1`` (decided exactly as membership in
    the cone of the defining exponents) gives a competitor ``z -> z^beta``;
    the bound is the best ``|w^beta|`` over ``0 <= beta_j <= B``.
    """
    if domain.reinhardt_cone is None:
        raise UnsupportedDomain(f"{domain.name} has no monomial (Reinhardt cone) description")
    w = as_point(w, domain.dim)
    if not bool(domain.contains(w)):
        raise ValueError(f"w={w.tolist()} is not in {domain.name}")
    n = domain.dim
    B = int(exponent_budget)
    if B < 1:
        raise ValueError("exponent budget must be >= 1")
    if (B + 1) ** n > 5_000_000:
        raise ValueError("exponent enumeration too large; lower the exponent budget")
    grid = np.array(list(itertools.product(range(B + 1), repeat=n))[1:], dtype=np.int64)
    with np.errstate(divide="ignore", invalid="ignore"):
        logw = np.log(np.abs(w))
        scores = np.where(grid > 0, grid * logw, 0.0).sum(axis=1)
    order = np.lexsort((np.arange(len(grid)), -scores))
    checked = 0
    for idx in order:
        checked += 1
        beta = tuple(int(x) for x in grid[idx])
        if cone_contains(domain.reinhardt_cone, beta):
            val = float(np.exp(scores[idx]))
            return CaratheodoryResult(HyperbolicValue(min(val, 1.0), BoundKind.LOWER),
                                      MonomialCandidate(beta, 1.0), checked)
    return CaratheodoryResult(HyperbolicValue(0.0, BoundKind.LOWER), None, checked)


def admissible_exponents(domain: DomainSpec, exponent_budget: int) -> list[tuple[int, ...]]:
    """All admissible monomial exponents with entries at most the budget."""
    if domain.reinhardt_cone is None:
        raise UnsupportedDomain(f"{domain.name} has no monomial (Reinhardt cone) description")
    return [b for b in itertools.product(range(exponent_budget + 1), repeat=domain.dim)
            if any(b) and cone_contains(domain.reinhardt_cone, b)]

