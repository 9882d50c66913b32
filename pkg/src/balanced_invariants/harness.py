"""Named verification scenarios with pass/fail reports.

Every clause compares quantities whose bound directions make the
comparison sound: a lower bound against an upper bound, or either against a
closed form.  Reports are plain data so two runs with the same seed
serialize identically.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

import numpy as np
from scipy.optimize import bisect

from .core import BoundKind, as_point, complex_to_json, unstar
from .discs import COMPETITOR_RHO, containment_margin, ex9, ex9_alpha, ex10, remark_b
from .domains import (
    DomainSpec,
    Pseudoconvex,
    bisect_gauge,
    hull_minkowski,
    make_domain,
    minkowski,
    sample_inside,
)
from .metrics import caratheodory_monomial_lower, lempert_upper, m_lempert_upper
from .optim import HULL_BUDGET, OptimizerBudget, restart_rng

CLOSED_TOL = 1e-8
OPT_TOL = 5e-2


@dataclass(frozen=True)
class Clause:
    """One checked relation ``lhs <relation> rhs`` with its tolerance."""

    description: str
    lhs: float
    rhs: float
    relation: str
    tolerance: float
    passed: bool
    lhs_kind: str = ""
    rhs_kind: str = ""
    skipped: bool = False

    def to_dict(self) -> dict:
        return {
            "description": self.description,
            "lhs": {"value": _num(self.lhs), "kind": self.lhs_kind},
            "rhs": {"value": _num(self.rhs), "kind": self.rhs_kind},
            "relation": self.relation,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "skipped": self.skipped,
        }


def _num(x: float) -> Any:
    x = float(x)
    return x if math.isfinite(x) else ("inf" if x > 0 else "-inf" if x < 0 else "nan")


def _kind(k: Any) -> str:
    return k.value if isinstance(k, BoundKind) else str(k)


def le(description: str, lhs: float, rhs: float, tol: float, lhs_kind: Any = "", rhs_kind: Any = "") -> Clause:
    return Clause(description, lhs, rhs, "<=", tol, bool(lhs <= rhs + tol), _kind(lhs_kind), _kind(rhs_kind))


def gt(description: str, lhs: float, rhs: float, margin: float, lhs_kind: Any = "", rhs_kind: Any = "") -> Clause:
    return Clause(description, lhs, rhs, ">", margin, bool(lhs > rhs + margin), _kind(lhs_kind), _kind(rhs_kind))


def close(description: str, lhs: float, rhs: float, tol: float, lhs_kind: Any = "", rhs_kind: Any = "") -> Clause:
    return Clause(description, lhs, rhs, "==", tol, bool(abs(lhs - rhs) <= tol), _kind(lhs_kind), _kind(rhs_kind))


def skipped(description: str) -> Clause:
    return Clause(description, math.nan, math.nan, "skip", 0.0, True, skipped=True)


@dataclass
class Report:
    scenario: str
    clauses: list[Clause] = field(default_factory=list)
    artifacts: dict = field(default_factory=dict)
    table: list[dict] = field(default_factory=list)
    params: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.clauses)

    def failures(self) -> list[Clause]:
        return [c for c in self.clauses if not c.passed]

    def to_dict(self) -> dict:
        out = {
            "scenario": self.scenario,
            "pass": self.passed,
            "params": self.params,
            "clauses": [c.to_dict() for c in self.clauses],
            "artifacts": self.artifacts,
        }
        if self.table:
            out["table"] = self.table
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        """Scan rows if present, otherwise one row per clause."""
        rows = self.table or [_flat_clause(c) for c in self.clauses]
        if not rows:
            return ""
        buf = io.StringIO()
        fields = list(rows[0])
        for r in rows[1:]:
            fields += [k for k in r if k not in fields]
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow(r)
        return buf.getvalue()


def _flat_clause(c: Clause) -> dict:
    d = c.to_dict()
    return {"description": d["description"], "lhs": d["lhs"]["value"], "lhs_kind": d["lhs"]["kind"],
            "relation": d["relation"], "rhs": d["rhs"]["value"], "rhs_kind": d["rhs"]["kind"],
            "tolerance": d["tolerance"], "pass": d["pass"]}


def _budget_dict(budget: OptimizerBudget) -> dict:
    return budget.to_dict()


def _fmt(p: np.ndarray) -> str:
    return "(" + ", ".join(f"{complex(x).real:.6g}" + (f"{complex(x).imag:+.6g}i" if complex(x).imag else "")
                           for x in p) + ")"


# ---------------------------------------------------------------------------
# scenarios

def verify_prop1(domain: DomainSpec, points: Iterable[Any] | None = None, budget: OptimizerBudget | None = None,
                 *, count: int = 20, seed: int = 0, hull_budget: OptimizerBudget | None = None,
                 exponent_budget: int = 64, hull: bool = True) -> Report:
    """Gauge bracket at the origin: hull <= Caratheodory <= Lempert <= h, sound directions only.

    Without ``points``, ``count`` seeded random points are drawn with gauge
    in ``[0.05, 0.9)``.  On example7 the closed form ``|z1|`` of the hull
    gauge for ``|z2| <= 1`` is checked against the monomial lower bound, and
    points with ``|z2| > 1`` must separate the lower bound from the hull
    upper bound.
    """
    if not domain.balanced:
        raise ValueError("verify_prop1 needs a balanced domain")
    budget = budget or OptimizerBudget(seed=seed)
    hull_budget = hull_budget or HULL_BUDGET.replace(seed=seed)
    if points is None:
        pts = list(sample_inside(domain, restart_rng(seed, 1), count, h_max=0.9, h_min=0.05))
    else:
        pts = [as_point(p, domain.dim) for p in points]
    rep = Report(f"prop1:{domain.name}", params={"domain": domain.describe(), "points": len(pts),
                                                 "budget": _budget_dict(budget), "seed": seed})
    zero = np.zeros(domain.dim, complex)
    reinhardt = domain.reinhardt_cone is not None
    if not reinhardt:
        rep.clauses.append(skipped(f"Caratheodory clauses skipped: {domain.name} is not a monomial Reinhardt domain"))
    for p in pts:
        tag = _fmt(p)
        h = minkowski(domain, p)
        k = lempert_upper(domain, zero, p, budget)
        row = {"point": complex_to_json(p), "h": h, "k_upper": k.value.starred, "k_kind": k.value.kind.value}
        if hull:
            hh = hull_minkowski(domain, p, budget=hull_budget)
            row.update(hull_upper=hh.value, hull_kind=hh.bound.kind.value)
            rep.clauses.append(le(f"hull <= h at {tag}", hh.value, h, 1e-9, hh.bound.kind, BoundKind.EXACT))
        if reinhardt:
            c = caratheodory_monomial_lower(domain, p, exponent_budget)
            row["c_lower"] = c.value.starred
            rep.clauses.append(le(f"c_lower <= k_upper at {tag}", c.value.starred, k.value.starred, 1e-9,
                                  BoundKind.LOWER, k.value.kind))
            rep.clauses.append(le(f"c_lower <= h at {tag}", c.value.starred, h, 1e-9, BoundKind.LOWER, BoundKind.EXACT))
            if domain.kind == "example7":
                if abs(p[1]) <= 1:
                    rep.clauses.append(close(f"c_lower equals closed-form hull |z1| at {tag}", c.value.starred,
                                             abs(p[0]), 1e-12, BoundKind.LOWER, BoundKind.EXACT))
                elif hull:
                    rep.clauses.append(gt(f"c_lower exceeds hull upper bound at {tag}", c.value.starred,
                                          hh.value, 1e-3, BoundKind.LOWER, hh.bound.kind))
        if domain.pseudoconvex is Pseudoconvex.YES:
            rep.clauses.append(close(f"k_upper matches h at {tag}", k.value.starred, h, OPT_TOL, k.value.kind,
                                     BoundKind.EXACT))
        rep.table.append(row)
    return rep


def verify_example9(budget: OptimizerBudget | None = None, ts: Iterable[float] = (0.2, 0.3, 0.45),
                    off_diagonal: Iterable[Any] = ((0.5, 0.2),), r: float = 0.98) -> Report:
    """Diagonal points: gauge ``2|t|`` against Lempert ``|t|``; off-diagonal Lempert bounded by max |a_i|."""
    budget = budget or OptimizerBudget()
    dom = make_domain("example9")
    zero = np.zeros(2, complex)
    ts = [float(t) for t in ts]
    rep = Report("example9", params={"ts": ts, "r": r, "budget": _budget_dict(budget)})
    for t in ts:
        p = np.array([t, t], complex)
        est = bisect_gauge(dom, p)
        rep.clauses.append(close(f"bisected h(t,t) = 2|t| at t={t:g}", est.value, 2 * abs(t), CLOSED_TOL,
                                 BoundKind.EXACT, BoundKind.EXACT))
        alpha = ex9_alpha(t, r)
        disc = ex9(r, alpha)
        lam = t / r
        hit = disc(lam)
        rep.clauses.append(close(f"ex9 competitor passes through (t,t) at t={t:g}", float(np.max(np.abs(hit - p))),
                                 0.0, 1e-12))
        margin = containment_margin(dom, disc, COMPETITOR_RHO)
        rep.clauses.append(gt(f"ex9 competitor admissible at t={t:g}", margin, 0.0, 0.0))
        comp_value = abs(lam) / COMPETITOR_RHO
        rep.clauses.append(le(f"competitor bound <= |t| + 0.02 at t={t:g}", comp_value, abs(t) + 0.02,
                              0.0, BoundKind.UPPER, BoundKind.EXACT))
        k = lempert_upper(dom, zero, p, budget)
        rep.clauses.append(le(f"lempert_upper(0,(t,t)) <= |t| + 0.02 at t={t:g}", k.value.starred, abs(t) + 0.02,
                              0.0, k.value.kind, BoundKind.EXACT))
        rep.table.append({"t": t, "h": est.value, "competitor": comp_value, "alpha": complex_to_json(alpha),
                          "margin": margin, "k_upper": k.value.starred, "k_source": k.source})
    for a in off_diagonal:
        a = as_point(a, 2)
        k = lempert_upper(dom, zero, a, budget)
        bound = float(np.max(np.abs(a)))
        rep.clauses.append(le(f"lempert_upper(0,a) <= max|a_i| + 0.02 at a={_fmt(a)}", k.value.starred,
                              bound + 0.02, 0.0, k.value.kind, BoundKind.EXACT))
        rep.table.append({"a": complex_to_json(a), "k_upper": k.value.starred, "k_source": k.source})
    return rep


def remark_a_mu(b: float) -> float:
    """Modulus of the root of ``b mu^2 + 2 mu + b`` inside the unit disc."""
    return (1.0 - math.sqrt(1.0 - b * b)) / b


def threshold_crossing(lo: float = 0.5, hi: float = 0.95) -> float:
    """Parameter where ``remark_a_mu`` crosses 1/2, by bisection."""
    return bisect(lambda b: remark_a_mu(b) - 0.5, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps)


def threshold_scan_remark_a(bs: Iterable[float] | None = None) -> Report:
    """Competitor ``(lam, -lam)`` against the transported removed set, across parameters b.

    The competitor meets the curve at the roots of ``b mu^2 + 2 mu + b``;
    it stays admissible while the root inside the disc has modulus below
    1/2, the inner radius of the removed annulus.
    """
    bs = [float(b) for b in (np.linspace(0.5, 0.95, 46) if bs is None else bs)]
    rep = Report("threshold", params={"bs": bs})
    b_star = threshold_crossing()
    rep.clauses.append(close("crossing of |mu| = 1/2 at b = 4/5", b_star, 0.8, 1e-9, BoundKind.EXACT, BoundKind.EXACT))
    rep.artifacts["crossing"] = b_star
    for b in bs:
        if not 0 < b < 1:
            raise ValueError("threshold scan needs b in (0, 1)")
        mu = remark_a_mu(b)
        roots = np.roots([b, 2.0, b])
        inside = roots[np.abs(roots) < 1]
        rep.clauses.append(close(f"closed-form |mu| matches polynomial root at b={b:g}",
                                 float(np.abs(inside).min()), mu, 1e-12))
        dom = make_domain("example9_mobius", {"b": b})
        margin = containment_margin(dom, remark_b(b), COMPETITOR_RHO)
        in_annulus = bool(0.5 <= mu < 1.0)
        if abs(b - 0.8) <= 1e-9:
            rep.clauses.append(close(f"|mu| = 1/2 at the threshold b={b:g}", mu, 0.5, 1e-9))
        elif b < 0.8:
            rep.clauses.append(gt(f"competitor admissible at b={b:g}", margin, 0.0, 0.0))
        else:
            rep.clauses.append(Clause(f"intersection inside removed annulus at b={b:g}", mu, 0.5, "in [1/2,1)",
                                      0.0, in_annulus and margin <= 0))
        rep.table.append({"b": b, "mu": mu, "margin": margin, "admissible": bool(margin > 0),
                          "blocked": in_annulus})
    return rep


def example10_cubic(a: float, d: float, x: np.ndarray) -> np.ndarray:
    return d * x ** 3 + (1 - 2 * a * a) * x ** 2 - d * (2 - a * a) * x + a * a


def verify_example10(a: float = 0.8, ds: Iterable[float] = (0.5,), budget: OptimizerBudget | None = None,
                     *, lempert_tol: float = 0.01, hull_tol: float = 5e-3) -> Report:
    """Points ``(0, d)``: gauge ``d/a`` against Lempert and hull values ``d``."""
    budget = budget or OptimizerBudget()
    dom = make_domain("example10", {"a": a})
    ds = [float(d) for d in ds]
    rep = Report(f"example10(a={a:g})", params={"a": a, "ds": ds, "budget": _budget_dict(budget)})
    zero = np.zeros(2, complex)
    xs = np.linspace(0, 1, 10001)[1:-1]
    for d in ds:
        if not 0 < d < a < 1:
            raise ValueError("verify_example10 needs 0 < d < a < 1")
        p = np.array([0, d], complex)
        est = bisect_gauge(dom, p)
        rep.clauses.append(close(f"bisected h(0,d) = d/a at d={d:g}", est.value, d / a, CLOSED_TOL,
                                 BoundKind.EXACT, BoundKind.EXACT))
        cubic_min = float(example10_cubic(a, d, xs).min())
        rep.clauses.append(gt(f"cubic certificate positive on (0,1) at d={d:g}", cubic_min, 0.0, 0.0))
        disc = ex10(d)
        margin = containment_margin(dom, disc, COMPETITOR_RHO)
        rep.clauses.append(gt(f"ex10 competitor admissible at d={d:g}", margin, 0.0, 0.0))
        k = lempert_upper(dom, zero, p, budget)
        rep.clauses.append(le(f"lempert_upper(0,(0,d)) <= d + {lempert_tol:g} at d={d:g}", k.value.starred,
                              d + lempert_tol, 0.0, k.value.kind, BoundKind.EXACT))
        hh = hull_minkowski(dom, p, budget=HULL_BUDGET.replace(seed=budget.seed))
        rep.clauses.append(le(f"hull upper <= d + {hull_tol:g} at d={d:g}", hh.value, d + hull_tol, 0.0,
                              hh.bound.kind, BoundKind.EXACT))
        rep.table.append({"d": d, "h": est.value, "h_over_d": est.value / d, "cubic_min": cubic_min,
                          "margin": margin, "k_upper": k.value.starred, "k_source": k.source,
                          "hull_upper": hh.value})
    return rep


def slice_scan(domain: DomainSpec, a: Any, m: int, lambdas: Iterable[float],
               budget: OptimizerBudget | None = None, *, tol: float = 1e-2,
               hull_budget: OptimizerBudget | None = None) -> Report:
    """Tabulate h, hull upper bound, chain upper bound (and monomial lower bound) along ``lambda * a``.

    A row is ``pinned`` when the chain upper bound lies within ``tol`` of
    the hull upper bound.  Clauses are the sound relations only.
    """
    budget = budget or OptimizerBudget()
    hull_budget = hull_budget or HULL_BUDGET.replace(seed=budget.seed)
    a = as_point(a, domain.dim)
    ha = minkowski(domain, a)
    lambdas = [float(x) for x in lambdas]
    for lam in lambdas:
        if not abs(lam) * ha < 1:
            raise ValueError(f"lambda={lam} leaves the slice |lambda| h(a) < 1")
    rep = Report(f"slice:{domain.name}", params={"a": complex_to_json(a), "m": m, "lambdas": lambdas,
                                                 "tol": tol, "budget": _budget_dict(budget)})
    zero = np.zeros(domain.dim, complex)
    for lam in lambdas:
        p = lam * a
        h = minkowski(domain, p)
        row = {"lambda": lam, "h": h}
        if not np.any(p):
            row.update(hull_upper=0.0, k_upper=0.0, pinned=True)
            rep.table.append(row)
            continue
        hh = hull_minkowski(domain, p, budget=hull_budget)
        k = m_lempert_upper(domain, zero, p, m, budget)
        row.update(hull_upper=hh.value, k_upper=k.value.starred, pinned=bool(abs(k.value.starred - hh.value) <= tol))
        rep.clauses.append(le(f"hull <= h at lambda={lam:g}", hh.value, h, 1e-9, hh.bound.kind, BoundKind.EXACT))
        if domain.reinhardt_cone is not None:
            c = caratheodory_monomial_lower(domain, p)
            row["c_lower"] = c.value.starred
            rep.clauses.append(le(f"c_lower <= k_upper at lambda={lam:g}", c.value.starred, k.value.starred,
                                  1e-9, BoundKind.LOWER, BoundKind.UPPER))
        rep.table.append(row)
    return rep


def divergence_probe(domain: DomainSpec, z: Any, b: Any, m: int, steps: int,
                     budget: OptimizerBudget | None = None) -> Report:
    """Values along ``w_k = (1 - 2^-k) b`` as the boundary point b is approached.

    Convex balanced domains use the lower bound ``artanh h(w_k)`` (the
    Caratheodory distance from the origin equals it); monomial Reinhardt
    domains use ``artanh`` of the monomial lower bound.  Both must grow
    strictly past 3.  Other domains only report chain upper bounds.
    """
    budget = budget or OptimizerBudget()
    z = as_point(z, domain.dim)
    b = as_point(b, domain.dim)
    rep = Report(f"divergence:{domain.name}", params={"z": complex_to_json(z), "b": complex_to_json(b),
                                                      "m": m, "steps": steps})
    hb = minkowski(domain, b) if domain.balanced else math.nan
    at_origin = not np.any(z)
    if domain.balanced and domain.bounded and at_origin and (domain.convex or domain.reinhardt_cone is not None):
        rep.clauses.append(close("b lies on the boundary", hb, 1.0, 1e-6, BoundKind.EXACT, BoundKind.EXACT))
        kind = BoundKind.LOWER
        values = []
        for k in range(1, steps + 1):
            w = (1 - 2.0 ** -k) * b
            if domain.convex:
                s = minkowski(domain, w)
            else:
                s = caratheodory_monomial_lower(domain, w).value.starred
            values.append(unstar(s))
            rep.table.append({"k": k, "value_distance": values[-1], "kind": kind.value})
        rep.clauses.append(Clause("strictly increasing", float(np.min(np.diff(values))) if len(values) > 1 else math.nan,
                                  0.0, ">", 0.0, bool(len(values) > 1 and np.all(np.diff(values) > 0)),
                                  kind.value, ""))
        rep.clauses.append(gt("final value exceeds 3", values[-1], 3.0, 0.0, kind, BoundKind.EXACT))
        rep.artifacts["mode"] = "lower"
    else:
        rep.artifacts["mode"] = "exploratory"
        for k in range(1, steps + 1):
            w = (1 - 2.0 ** -k) * b
            r = m_lempert_upper(domain, z, w, m, budget)
            rep.table.append({"k": k, "value_distance": _num(r.value.distance), "kind": r.value.kind.value})
    return rep


# ---------------------------------------------------------------------------
# exploration hooks (report only)

def chain_length_experiment(domain: DomainSpec, z: Any, w: Any, budget: OptimizerBudget | None = None) -> Report:
    """Compare the m = 2 and m = 3 chain upper bounds; asserts nothing."""
    budget = budget or OptimizerBudget()
    rep = Report(f"chain_length:{domain.name}", params={"z": complex_to_json(as_point(z)),
                                                        "w": complex_to_json(as_point(w))})
    for m in (1, 2, 3):
        r = m_lempert_upper(domain, z, w, m, budget)
        rep.table.append({"m": m, "value_starred": r.value.starred, "kind": r.value.kind.value})
    return rep


def gauge_gap_search(domains: Iterable[DomainSpec], count: int = 8, budget: OptimizerBudget | None = None,
                     seed: int = 0) -> Report:
    """Tabulate ``h - k_upper(0, .)`` on balanced domains not known to be pseudoconvex; asserts nothing.

    A gap near zero at every sample marks a candidate for a non-pseudoconvex
    domain on which the Lempert function from the origin equals the gauge.
    """
    budget = budget or OptimizerBudget(seed=seed)
    rep = Report("gauge_gap_search", params={"count": count, "seed": seed})
    for dom in domains:
        if not dom.balanced or dom.pseudoconvex is Pseudoconvex.YES:
            continue
        zero = np.zeros(dom.dim, complex)
        for p in sample_inside(dom, restart_rng(seed, 2), count, h_max=0.9, h_min=0.05):
            h = minkowski(dom, p)
            k = lempert_upper(dom, zero, p, budget)
            rep.table.append({"domain": dom.name, "point": json.dumps(complex_to_json(p)), "h": h,
                              "k_upper": k.value.starred, "gap": h - k.value.starred})
    return rep


# ---------------------------------------------------------------------------
# registry

def _scenarios(budget: OptimizerBudget) -> dict[str, Callable[[], Report]]:
    seed = budget.seed
    ex7_points = [(0.5, 0.5), (0.3, -0.8j), (0.7, 0.2 + 0.3j), (0.1, 0.95), (-0.4j, 0.6),
                  (0.5, 1.2), (0.3, 1.5), (0.6j, -1.1), (0.2, 2.0 + 0.5j), (0.45, 1.3j)]
    a7 = np.array([0.5, 0.9]) / math.hypot(0.5, 0.9)
    return {
        "prop1_polydisc2": lambda: verify_prop1(make_domain("polydisc", {"n": 2}), budget=budget, seed=seed),
        "prop1_ball2": lambda: verify_prop1(make_domain("ball", {"n": 2}), budget=budget, seed=seed),
        "prop1_polydisc3": lambda: verify_prop1(make_domain("polydisc", {"n": 3}), budget=budget, seed=seed),
        "prop1_example7": lambda: verify_prop1(make_domain("example7"), ex7_points, budget=budget, seed=seed),
        "example9": lambda: verify_example9(budget),
        "threshold": lambda: threshold_scan_remark_a(),
        "example10": lambda: verify_example10(0.8, (0.5,), budget),
        "example10_a09": lambda: verify_example10(0.9, (0.3,), budget),
        "slice_ball": lambda: slice_scan(make_domain("ball", {"n": 2}), (1, 0), 2, (0.25, 0.5, 0.75), budget),
        "slice_example7": lambda: slice_scan(make_domain("example7"), a7, 2, (0.25, 0.5, 1.0), budget),
        "divergence_polydisc": lambda: divergence_probe(make_domain("polydisc", {"n": 2}), (0, 0), (1, 0), 2, 8),
        "divergence_ball": lambda: divergence_probe(make_domain("ball", {"n": 2}), (0, 0), (1, 0), 3, 8),
    }


def scenario_names() -> list[str]:
    return sorted(_scenarios(OptimizerBudget()))


def run_scenario(name: str, budget: OptimizerBudget | None = None) -> Report:
    table = _scenarios(budget or OptimizerBudget())
    if name not in table:
        raise KeyError(f"unknown scenario {name!r}; known: {', '.join(sorted(table))}")
    return table[name]()


def _run_named(args: tuple[str, OptimizerBudget]) -> Report:
    return run_scenario(*args)


def verify_all(budget: OptimizerBudget | None = None, names: Iterable[str] | None = None,
               workers: int = 1) -> list[Report]:
    """Run scenarios (all by default), optionally in worker processes; results sorted by name."""
    budget = budget or OptimizerBudget()
    names = sorted(names or scenario_names())
    jobs = [(n, budget) for n in names]
    if workers > 1 and len(jobs) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_run_named, jobs))
    else:
        reports = [_run_named(j) for j in jobs]
    return sorted(reports, key=lambda r: r.scenario)
