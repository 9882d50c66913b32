"""Balanced domains: catalog, Minkowski gauges, convex-hull gauge search, structural probes.

A balanced domain is determined by its Minkowski gauge ``h`` through
``D = {h < 1}``.  Every catalog entry carries a vectorized closed-form gauge;
the bisection gauge works from the membership predicate alone and is used to
cross-check the closed forms.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .core import Bound, BoundKind, as_point, complex_to_json, mobius
from .optim import (
    HULL_BUDGET,
    BestTracker,
    OptimizerBudget,
    complex_to_real,
    nelder_mead,
    real_to_complex,
    restart_rng,
)

log = logging.getLogger(__name__)

GaugeFn = Callable[[np.ndarray], np.ndarray]


class Pseudoconvex(str, enum.Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class RemovedSet:
    """A one-dimensional analytic piece cut out of a polydisc.

    ``diagonal``: points ``(t, ..., t)`` with ``|t| >= inner``.
    ``mobius_graph``: points ``(psi_b(s), s)`` with ``inner <= |s| < 1``.
    ``eps`` thickens the set (experiments only; 0 means the exact set).
    """

    kind: str
    b: complex = 0j
    inner: float = 0.5
    eps: float = 0.0

    def __post_init__(self):
        if self.kind not in ("diagonal", "mobius_graph"):
            raise ValueError(f"unknown removed-set kind {self.kind!r}")

    def parameter(self, z: np.ndarray) -> np.ndarray:
        """Position along the removed curve that a point would have if it were on it."""
        return z[..., 0] if self.kind == "diagonal" else z[..., 1]

    def contains(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if self.kind == "diagonal":
            off = np.max(np.abs(z - z[..., :1]), axis=-1)
        else:
            off = np.abs(z[..., 0] - mobius(self.b)(z[..., 1]))
        s = np.abs(self.parameter(z))
        near = off <= self.eps if self.eps > 0 else off == 0
        return near & (s >= self.inner) & (s < 1.0)


@dataclass(frozen=True, eq=False)
class DomainSpec:
    """Description of a (usually balanced) domain in C^n.

    ``membership`` and ``gauge`` are vectorized over leading axes.  For
    non-balanced entries ``ambient_gauge`` is the gauge of an enclosing
    balanced domain; the difference is exactly ``removed``.
    ``in_unit_polydisc`` marks domains contained in the unit polydisc, whose
    invariant functions are then bounded below by those of the polydisc.
    """

    name: str
    dim: int
    membership: Callable[[np.ndarray], np.ndarray]
    gauge: GaugeFn | None = None
    reinhardt_cone: tuple[tuple[int, ...], ...] | None = None
    pseudoconvex: Pseudoconvex = Pseudoconvex.UNKNOWN
    bounding_radius: float | None = None
    balanced: bool = True
    convex: bool = False
    removed: RemovedSet | None = None
    ambient_gauge: GaugeFn | None = None
    in_unit_polydisc: bool = False
    kind: str = "custom"
    params: dict = field(default_factory=dict)

    @property
    def bounded(self) -> bool:
        return self.bounding_radius is not None

    def contains(self, z: Any) -> np.ndarray:
        return np.asarray(self.membership(np.asarray(z, dtype=complex)), dtype=bool)

    def containment_gauge(self, zs: np.ndarray) -> np.ndarray:
        """Function whose sublevel set {< 1} is the domain up to ``removed``."""
        if self.balanced and self.gauge is not None:
            return self.gauge(zs)
        if self.ambient_gauge is not None:
            return self.ambient_gauge(zs)
        if not self.balanced:
            raise ValueError(f"{self.name}: no gauge available for containment")
        zs = np.asarray(zs, dtype=complex)
        flat = zs.reshape(-1, self.dim)
        vals = np.array([bisect_gauge(self, p).value for p in flat])
        return vals.reshape(zs.shape[:-1])

    def strictly_inside(self, z: np.ndarray, slack: float = 1e-6) -> bool:
        z = np.asarray(z, dtype=complex)
        if not bool(self.contains(z)):
            return False
        return bool(self.containment_gauge(z[None, :])[0] < 1.0 - slack)

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "params": {k: (complex_to_json(v) if isinstance(v, complex) else v) for k, v in self.params.items()},
            "name": self.name,
            "dim": self.dim,
            "pseudoconvex": self.pseudoconvex.value,
            "balanced": self.balanced,
            "bounded": self.bounded,
        }


# ---------------------------------------------------------------------------
# gauges

def _max_abs(z: np.ndarray) -> np.ndarray:
    return np.max(np.abs(z), axis=-1)


def _norm(z: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(np.abs(z) ** 2, axis=-1))


def monomial_gauge(cone: tuple[tuple[int, ...], ...]) -> GaugeFn:
    """Gauge of ``{|z^beta_i| < 1 for all i}``: max_i |z^beta_i|^(1/|beta_i|)."""
    betas = np.array(cone, dtype=float)
    weights = betas / betas.sum(axis=1, keepdims=True)

    def h(z):
        a = np.abs(np.asarray(z, dtype=complex))
        with np.errstate(divide="ignore", invalid="ignore"):
            loga = np.log(a)
            # a zero coordinate with zero weight does not matter
            terms = np.where(weights > 0, weights * loga[..., None, :], 0.0).sum(axis=-1)
        return np.exp(terms).max(axis=-1)

    return h


def _diagonal_gauge(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    h = _max_abs(z)
    on_diag = np.all(z == z[..., :1], axis=-1) & (h > 0)
    return np.where(on_diag, 2.0 * h, h)


def _example10_gauge(a: float) -> GaugeFn:
    def h(z):
        z = np.asarray(z, dtype=complex)
        x = np.abs(z[..., 0])
        y = np.abs(z[..., 1])
        c = 1.0 - a * a
        # positive root of a^2 t^2 + 2 c x t - y^2
        t0 = (np.sqrt((c * x) ** 2 + (a * y) ** 2) - c * x) / (a * a)
        return np.maximum(np.maximum(x, y), t0)

    return h


def _sublevel(gauge: GaugeFn) -> Callable[[np.ndarray], np.ndarray]:
    return lambda z: gauge(z) < 1.0


# ---------------------------------------------------------------------------
# catalog

def polydisc(n: int = 2) -> DomainSpec:
    n = int(n)
    cone = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    return DomainSpec(
        name=f"polydisc({n})", dim=n, membership=_sublevel(_max_abs), gauge=_max_abs,
        reinhardt_cone=cone, pseudoconvex=Pseudoconvex.YES, bounding_radius=math.sqrt(n), in_unit_polydisc=True,
        convex=True, kind="polydisc", params={"n": n},
    )


def ball(n: int = 2) -> DomainSpec:
    n = int(n)
    return DomainSpec(
        name=f"ball({n})", dim=n, membership=_sublevel(_norm), gauge=_norm,
        pseudoconvex=Pseudoconvex.YES, bounding_radius=1.0, in_unit_polydisc=True, convex=True,
        kind="ball", params={"n": n},
    )


def example9_n(n: int = 2, eps: float = 0.0) -> DomainSpec:
    """Polydisc of dimension n with the diagonal tail {(t,...,t): |t| >= 1/2} removed."""
    n = int(n)
    if n < 2:
        raise ValueError("example9_n needs n >= 2")
    removed = RemovedSet("diagonal", eps=eps)

    def member(z):
        z = np.asarray(z, dtype=complex)
        return (_max_abs(z) < 1.0) & ~removed.contains(z)

    kind = "example9" if n == 2 else "example9_n"
    params = {"eps": eps} if n == 2 else {"n": n, "eps": eps}
    return DomainSpec(
        name=f"{kind}({n})" if n != 2 else "example9", dim=n, membership=member,
        gauge=_diagonal_gauge, pseudoconvex=Pseudoconvex.NO, bounding_radius=math.sqrt(n), in_unit_polydisc=True,
        removed=removed, ambient_gauge=_max_abs, kind=kind, params=params,
    )


def example9(eps: float = 0.0) -> DomainSpec:
    return example9_n(2, eps=eps)


def example9_mobius(b: complex, eps: float = 0.0) -> DomainSpec:
    """Bidisc minus {(psi_b(s), s): 1/2 <= |s| < 1}; not balanced."""
    b = complex(b)
    if not abs(b) < 1:
        raise ValueError("example9_mobius needs |b| < 1")
    removed = RemovedSet("mobius_graph", b=b, eps=eps)

    def member(z):
        z = np.asarray(z, dtype=complex)
        return (_max_abs(z) < 1.0) & ~removed.contains(z)

    return DomainSpec(
        name=f"example9_mobius({b.real:g}{b.imag:+g}j)", dim=2, membership=member,
        pseudoconvex=Pseudoconvex.NO, bounding_radius=math.sqrt(2), in_unit_polydisc=True, balanced=False,
        removed=removed, ambient_gauge=_max_abs, kind="example9_mobius",
        params={"b": b, "eps": eps},
    )


def example10(a: float = 0.8) -> DomainSpec:
    """{z in bidisc : |z2|^2 - a^2 < 2(1 - a^2)|z1|}, 0 < a < 1."""
    a = float(a)
    if not 0.0 < a < 1.0:
        raise ValueError("example10 needs 0 < a < 1")
    g = _example10_gauge(a)
    return DomainSpec(
        name=f"example10({a:g})", dim=2, membership=_sublevel(g), gauge=g,
        pseudoconvex=Pseudoconvex.NO, bounding_radius=math.sqrt(2), in_unit_polydisc=True,
        kind="example10", params={"a": a},
    )


def example7() -> DomainSpec:
    """{|z1| < 1, |z1^34 z2^55| < 1}: unbounded pseudoconvex Reinhardt domain."""
    cone = ((1, 0), (34, 55))
    g = monomial_gauge(cone)
    return DomainSpec(
        name="example7", dim=2, membership=_sublevel(g), gauge=g, reinhardt_cone=cone,
        pseudoconvex=Pseudoconvex.YES, bounding_radius=None, kind="example7", params={},
    )


CATALOG: dict[str, Callable[..., DomainSpec]] = {
    "polydisc": polydisc,
    "ball": ball,
    "example9": example9,
    "example9_n": example9_n,
    "example9_mobius": example9_mobius,
    "example10": example10,
    "example7": example7,
}


def make_domain(kind: str, params: dict | None = None) -> DomainSpec:
    """Build a catalog domain from ``{"kind": ..., "params": {...}}`` style data."""
    if kind not in CATALOG:
        raise KeyError(f"unknown domain kind {kind!r}; known kinds: {', '.join(sorted(CATALOG))}")
    params = dict(params or {})
    try:
        return CATALOG[kind](**params)
    except TypeError as exc:
        raise ValueError(f"bad parameters for {kind}: {exc}") from None


# ---------------------------------------------------------------------------
# Minkowski gauge

@dataclass(frozen=True)
class GaugeEstimate:
    value: float
    may_be_zero: bool = False


def _cone_says_zero(domain: DomainSpec, z: np.ndarray) -> bool:
    """On a monomial domain the gauge vanishes iff every defining monomial vanishes at z."""
    if domain.reinhardt_cone is None:
        return False
    zero = np.abs(z) == 0
    return all(any(b > 0 and zero[i] for i, b in enumerate(beta)) for beta in domain.reinhardt_cone)


def bisect_gauge(domain: DomainSpec, z: Any, tol: float = 1e-10) -> GaugeEstimate:
    """Minkowski gauge from the membership predicate alone.

    Balancedness makes ``t -> [z/t in D]`` monotone, so bisection between an
    outside scale and an inside scale converges to the gauge.
    """
    if not domain.balanced:
        raise ValueError(f"{domain.name} is not balanced; its Minkowski gauge is not defined")
    z = as_point(z, domain.dim)
    norm = float(np.linalg.norm(z))
    if norm == 0.0:
        return GaugeEstimate(0.0)

    def inside(t):
        return bool(domain.contains(z / t))

    if domain.bounded:
        lo = norm / domain.bounding_radius
    else:
        if _cone_says_zero(domain, z):
            return GaugeEstimate(0.0)
        lo = norm
        for _ in range(1100):
            if not inside(lo):
                break
            lo *= 0.5
            if lo < 1e-300:
                log.warning("%s: gauge may be zero along %s", domain.name, z)
                return GaugeEstimate(lo, may_be_zero=True)
    hi = max(2.0 * lo, norm)
    for _ in range(1100):
        if inside(hi):
            break
        hi *= 2.0
    else:
        raise RuntimeError(f"{domain.name}: could not find an inside scale for {z}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if inside(mid):
            hi = mid
        else:
            lo = mid
    return GaugeEstimate(0.5 * (lo + hi))


def minkowski(domain: DomainSpec, z: Any) -> float:
    """h_D(z); closed form when the domain provides one, bisection otherwise."""
    if not domain.balanced:
        raise ValueError(f"{domain.name} is not balanced; its Minkowski gauge is not defined")
    z = as_point(z, domain.dim)
    if domain.gauge is not None:
        return float(domain.gauge(z[None, :])[0])
    return bisect_gauge(domain, z).value


def gauge_values(domain: DomainSpec, zs: np.ndarray) -> np.ndarray:
    if domain.gauge is not None:
        return domain.gauge(zs)
    return domain.containment_gauge(zs)


# ---------------------------------------------------------------------------
# convex hull gauge

@dataclass(frozen=True)
class HullResult:
    bound: Bound
    terms: tuple[np.ndarray, ...]
    flagged: bool = False

    @property
    def value(self) -> float:
        return self.bound.value

    def to_dict(self) -> dict:
        return {**self.bound.to_dict(), "terms": [complex_to_json(t) for t in self.terms],
                "budget_exhausted": self.flagged}


def _hull_seeds(z: np.ndarray, k: int, previous: list[np.ndarray], rng: np.random.Generator,
                count: int) -> list[np.ndarray]:
    n = z.size
    seeds = []
    padded = list(previous) + [np.zeros(n, complex)] * (k - len(previous))
    seeds.append(np.array(padded[: k - 1]))
    nz = [i for i in range(n) if z[i] != 0]
    if 1 < len(nz) <= k:
        parts = []
        for i in nz:
            e = np.zeros(n, complex)
            e[i] = z[i]
            parts.append(e)
        parts += [np.zeros(n, complex)] * (k - len(parts))
        seeds.append(np.array(parts[: k - 1]))
    scale = float(np.linalg.norm(z))
    while len(seeds) < count:
        noise = rng.normal(size=(k - 1, n)) + 1j * rng.normal(size=(k - 1, n))
        seeds.append(z / k + 0.5 * scale * noise / math.sqrt(2 * n))
    return seeds[:count]


def hull_minkowski(domain: DomainSpec, z: Any, max_terms: int | None = None,
                   budget: OptimizerBudget | None = None) -> HullResult:
    """Upper approximation of the convex-hull gauge by infimal decomposition.

    Searches ``z = a_1 + ... + a_k`` for ``k <= max_terms`` minimizing
    ``sum h(a_j)``; the last term absorbs the constraint.  Each larger ``k``
    starts from the best smaller decomposition, so the result is
    nonincreasing in ``max_terms`` and never above ``h(z)``.  Convex
    balanced domains return ``h(z)`` as an exact value.
    """
    budget = budget or HULL_BUDGET
    z = as_point(z, domain.dim)
    n = domain.dim
    k_max = 2 * n + 1 if max_terms is None else int(max_terms)
    if k_max < 1:
        raise ValueError("max_terms must be >= 1")
    best_terms = [z]
    best = float(gauge_values(domain, z[None, :])[0])
    if domain.convex and domain.balanced:
        return HullResult(Bound(best, BoundKind.EXACT), tuple(best_terms))
    if np.linalg.norm(z) == 0 or k_max == 1:
        return HullResult(Bound(best, BoundKind.UPPER), tuple(best_terms))
    converged_any = False
    step = 0.1 * float(np.linalg.norm(z)) + 1e-3
    for k in range(2, k_max + 1):
        def objective(x, k=k):
            head = real_to_complex(x).reshape(k - 1, n)
            terms = np.vstack([head, z - head.sum(axis=0)])
            v = float(gauge_values(domain, terms).sum())
            return v, True, v

        tracker = BestTracker(objective)
        rng = restart_rng(budget.seed, 7919, k)
        for seed in _hull_seeds(z, k, best_terms, rng, budget.restarts):
            x0 = complex_to_real(seed)
            tracker.offer(x0)
            converged_any |= nelder_mead(tracker, x0, step, budget.max_iterations)
        if tracker.best_value < best:
            head = real_to_complex(tracker.best_x).reshape(k - 1, n)
            best = tracker.best_value
            best_terms = [*head, z - head.sum(axis=0)]
    return HullResult(Bound(best, BoundKind.UPPER), tuple(best_terms), flagged=not converged_any)


def subadditivity_gap(domain: DomainSpec, z: Any, budget: OptimizerBudget | None = None) -> float:
    """h(z) minus the best two-term decomposition value, clipped at 0."""
    h = minkowski(domain, z)
    return max(0.0, h - hull_minkowski(domain, z, 2, budget).value)


# ---------------------------------------------------------------------------
# structural probes

def sample_inside(domain: DomainSpec, rng: np.random.Generator, count: int,
                  h_max: float = 0.95, h_min: float = 0.0) -> np.ndarray:
    """Random points with gauge uniform in [h_min, h_max) along random complex directions."""
    n = domain.dim
    out = []
    while len(out) < count:
        x = rng.normal(size=n) + 1j * rng.normal(size=n)
        h = float(gauge_values(domain, x[None, :])[0])
        target = rng.uniform(h_min, h_max)
        if h == 0.0 or target == 0.0:
            continue
        out.append(x * (target / h))
    return np.array(out)


@dataclass
class ProbeReport:
    violations: list[dict]
    max_margin: float
    samples: int
    skipped: int

    def to_dict(self) -> dict:
        return {"violations": self.violations, "max_margin": self.max_margin,
                "samples": self.samples, "skipped": self.skipped}


def pseudoconvexity_probe(domain: DomainSpec, samples: int = 200, seed: int = 0,
                          quadrature: int = 64, threshold: float = 1e-6) -> ProbeReport:
    """Search for failures of the sub-mean-value inequality for log h on complex lines.

    The circle radius is kept at a quarter of the smallest coordinate of the
    centre over the largest direction coordinate, which keeps the trapezoid
    rule from producing false violations for logs of monomials and norms.
    """
    rng = restart_rng(seed, 104729)
    theta = 2 * np.pi * np.arange(quadrature) / quadrature
    circle = np.exp(1j * theta)
    violations = []
    max_margin = -np.inf
    skipped = 0
    centres = sample_inside(domain, rng, samples, h_max=0.95, h_min=0.05)
    n = domain.dim
    for i, z0 in enumerate(centres):
        if i % 2:
            v = np.zeros(n, complex)
            v[rng.integers(n)] = np.exp(2j * np.pi * rng.uniform())
        else:
            v = rng.normal(size=n) + 1j * rng.normal(size=n)
        r = 0.25 * np.min(np.abs(z0)) / np.max(np.abs(v))
        if r == 0.0:
            skipped += 1
            continue
        pts = z0[None, :] + r * circle[:, None] * v[None, :]
        hc = gauge_values(domain, z0[None, :])[0]
        hs = gauge_values(domain, pts)
        if hc == 0.0 or np.any(hs == 0.0):
            skipped += 1
            continue
        margin = float(np.log(hc) - np.mean(np.log(hs)))
        max_margin = max(max_margin, margin)
        if margin > threshold:
            violations.append({"center": complex_to_json(z0), "direction": complex_to_json(v),
                               "radius": float(r), "margin": margin})
    return ProbeReport(violations, float(max_margin), samples, skipped)


def balancedness_check(domain: DomainSpec, samples: int = 500, seed: int = 0) -> dict:
    """Max deviation of h(lam z) from |lam| h(z) and count of membership closure failures."""
    if not domain.balanced:
        raise ValueError(f"{domain.name} is not balanced")
    rng = restart_rng(seed, 15485863)
    zs = sample_inside(domain, rng, samples, h_max=0.999)
    lam = np.sqrt(rng.uniform(size=samples)) * np.exp(2j * np.pi * rng.uniform(size=samples))
    lz = lam[:, None] * zs
    dev = np.abs(gauge_values(domain, lz) - np.abs(lam) * gauge_values(domain, zs))
    closure = int(np.count_nonzero(~domain.contains(lz)))
    return {"samples": samples, "max_deviation": float(dev.max()), "membership_failures": closure}
