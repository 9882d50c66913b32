"""Analytic discs: polynomial and closed-form rational maps of the unit disc into C^n.

Every disc is stored coordinatewise as numerator/denominator coefficient
arrays (ascending powers), which gives evaluation, rescaling and the exact
intersection test against removed analytic sets from one representation.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.polynomial import polynomial as P

from .core import as_point, check_in_disc, complex_to_json
from .domains import DomainSpec, RemovedSet

DEFAULT_RHO = 0.995
COMPETITOR_RHO = 1.0 - 1e-6


class DegenerateInterpolation(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class AnalyticDisc:
    """Rational map ``lam -> (num_i(lam) / den_i(lam))_i``.

    ``variant`` is ``"polynomial"`` (all denominators 1) or ``"competitor"``
    (a named closed form; ``params`` records how it was built).
    """

    numerators: tuple[np.ndarray, ...]
    denominators: tuple[np.ndarray, ...]
    variant: str = "polynomial"
    name: str = "polynomial"
    params: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.numerators)

    def __call__(self, lam: Any) -> np.ndarray:
        lam = np.asarray(lam, dtype=complex)
        cols = [P.polyval(lam, num) / P.polyval(lam, den)
                for num, den in zip(self.numerators, self.denominators)]
        return np.stack(cols, axis=-1)

    def rescaled(self, rho: float) -> "AnalyticDisc":
        """The disc ``lam -> self(rho * lam)``."""
        def scale(c):
            return c * rho ** np.arange(c.size)
        return AnalyticDisc(tuple(map(scale, self.numerators)), tuple(map(scale, self.denominators)),
                            self.variant, self.name, {**self.params, "rescaled_by": rho})

    def to_dict(self) -> dict:
        out = {"variant": self.variant, "name": self.name}
        if self.variant == "polynomial":
            out["coefficients"] = complex_to_json(polynomial_coefficients(self))
        else:
            out["params"] = {k: complex_to_json(v) if isinstance(v, complex) else v
                             for k, v in self.params.items()}
        return out


def polynomial_disc(coeffs: Any) -> AnalyticDisc:
    """Disc ``sum_j c_j lam^j`` from a ``(degree + 1, n)`` coefficient table."""
    c = np.asarray(coeffs, dtype=complex)
    if c.ndim != 2 or c.shape[0] < 2:
        raise ValueError("coefficient table must have shape (degree + 1, n) with degree >= 1")
    one = np.ones(1, complex)
    return AnalyticDisc(tuple(c[:, i].copy() for i in range(c.shape[1])), (one,) * c.shape[1])


def polynomial_coefficients(disc: AnalyticDisc) -> np.ndarray:
    if disc.variant != "polynomial":
        raise ValueError("not a polynomial disc")
    d = max(num.size for num in disc.numerators)
    out = np.zeros((d, disc.dim), complex)
    for i, num in enumerate(disc.numerators):
        out[: num.size, i] = num / disc.denominators[i][0]
    return out


def disc_eval(disc: AnalyticDisc, lam: complex) -> np.ndarray:
    check_in_disc(lam, "lambda")
    return disc(complex(lam))


# ---------------------------------------------------------------------------
# competitors

def _competitor(name: str, params: dict, parts: list[tuple[list, list]]) -> AnalyticDisc:
    nums = tuple(np.asarray(num, complex) for num, _ in parts)
    dens = tuple(np.asarray(den, complex) for _, den in parts)
    return AnalyticDisc(nums, dens, "competitor", name, params)


def ex9(r: float, alpha: complex, n: int = 2) -> AnalyticDisc:
    """``(r lam, ..., r lam, lam (lam - alpha) / (1 - conj(alpha) lam))``."""
    alpha = check_in_disc(alpha, "alpha")
    lin = ([0.0, r], [1.0])
    blaschke = ([0.0, -alpha, 1.0], [1.0, -alpha.conjugate()])
    return _competitor("ex9", {"r": r, "alpha": alpha, "n": n}, [lin] * (n - 1) + [blaschke])


def ex9_alpha(t: complex, r: float) -> complex:
    """The alpha making the last coordinate of ``ex9(r, alpha)`` equal t at lam = t/r.

    Solves ``(l0 - alpha) / (1 - conj(alpha) l0) = r`` with ``l0 = t / r``.
    """
    t = complex(t)
    if not abs(t) < r < 1:
        raise ValueError("ex9 needs |t| < r < 1")
    l0 = t / r
    return (l0 * (1 - r * r) - r * (1 - abs(l0) ** 2)) / (1 - r * r * abs(l0) ** 2)


def ex10(d: float, phase: complex = 1.0) -> AnalyticDisc:
    """``(lam (lam - d) / (1 - d lam), phase * lam)``; hits ``(0, phase d)`` at lam = d."""
    return _competitor("ex10", {"d": float(d), "phase": complex(phase)},
                       [([0.0, -d, 1.0], [1.0, -d]), ([0.0, phase], [1.0])])


def remark_a(a1: complex, a2: complex) -> AnalyticDisc:
    """``(lam, lam a2 / a1)``; hits ``(a1, a2)`` at lam = a1."""
    return _competitor("remark_a", {"a1": complex(a1), "a2": complex(a2)},
                       [([0.0, 1.0], [1.0]), ([0.0, complex(a2) / complex(a1)], [1.0])])


def remark_b(b: complex, r: float = 1.0) -> AnalyticDisc:
    """``(r lam, -r lam)`` as a candidate disc in the transported domain for parameter b."""
    return _competitor("remark_b", {"b": complex(b), "r": float(r)},
                       [([0.0, r], [1.0]), ([0.0, -r], [1.0])])


def catalog_competitors(domain: DomainSpec, z: np.ndarray, w: np.ndarray) -> list[tuple[AnalyticDisc, complex]]:
    """Closed-form competitor discs applicable to the pair (z, w): ``[(disc, alpha)]``
    with ``disc(0) = z`` and ``disc(alpha) = w``."""
    if np.any(z != 0):
        return []
    out = []
    if domain.kind in ("example9", "example9_n"):
        n = domain.dim
        if np.all(w == w[0]) and 0 < abs(w[0]) < 0.5:
            t = complex(w[0])
            for r in (0.9, 0.95, 0.98, 0.99, 0.995, 0.999):
                if abs(t) < r:
                    out.append((ex9(r, ex9_alpha(t, r), n), t / r))
        elif n == 2 and w[0] != w[1]:
            if abs(w[0]) >= abs(w[1]):
                out.append((remark_a(w[0], w[1]), complex(w[0])))
            else:
                disc = remark_a(w[1], w[0])
                swapped = AnalyticDisc(disc.numerators[::-1], disc.denominators[::-1], disc.variant,
                                       disc.name, {**disc.params, "swapped": True})
                out.append((swapped, complex(w[1])))
    elif domain.kind == "example9_mobius":
        if w[1] == -w[0] and w[0] != 0:
            out.append((remark_b(domain.params["b"], 1.0), complex(w[0])))
    elif domain.kind == "example10":
        d = abs(w[1])
        if w[0] == 0 and 0 < d < domain.params["a"]:
            out.append((ex10(d, w[1] / d), complex(d)))
    return out


# ---------------------------------------------------------------------------
# interpolation

def interpolating_disc(z: Any, w: Any, alpha: complex, degree: int = 1,
                       free: Any = None) -> AnalyticDisc:
    """Polynomial disc with ``phi(0) = z`` and ``phi(alpha) = w`` exactly.

    ``free`` holds the coefficients of degree 2..degree; the linear
    coefficient is solved from the endpoint constraint.
    """
    z = as_point(z)
    w = as_point(w, z.size)
    alpha = complex(alpha)
    if degree < 1:
        raise ValueError("degree must be >= 1")
    if abs(alpha) < 1e-12:
        raise DegenerateInterpolation("interpolation node alpha is (numerically) zero")
    free = np.zeros((degree - 1, z.size), complex) if free is None else np.asarray(free, complex)
    if free.shape != (degree - 1, z.size):
        raise ValueError(f"free coefficients must have shape {(degree - 1, z.size)}")
    powers = alpha ** np.arange(2, degree + 1)
    c1 = (w - z - powers @ free) / alpha
    return polynomial_disc(np.vstack([z, c1, free]))


def two_node_disc(z: np.ndarray, w: np.ndarray, u: complex, v: complex, free: np.ndarray) -> AnalyticDisc:
    """Polynomial disc with ``phi(u) = z`` and ``phi(v) = w``; c0 and c1 are solved."""
    return polynomial_disc(two_node_coefficients(z, w, u, v, free))


def two_node_coefficients(z, w, u, v, free) -> np.ndarray:
    if v == u:
        raise DegenerateInterpolation("interpolation nodes coincide")
    degree = free.shape[0] + 1
    j = np.arange(2, degree + 1)
    pu, pv = u ** j, v ** j
    c1 = (w - z - (pv - pu) @ free) / (v - u)
    c0 = z - c1 * u - pu @ free
    return np.vstack([c0, c1, free])


# ---------------------------------------------------------------------------
# containment

@dataclass(frozen=True)
class DiscGrid:
    rho: float
    radii: int
    angles: int
    points: np.ndarray
    outer: np.ndarray

    def to_dict(self) -> dict:
        return {"rho": self.rho, "radii": self.radii, "angles": self.angles}


@functools.lru_cache(maxsize=256)
def make_grid(rho: float, radii: int = 12, angles: int = 256, inner_angles: int = 64) -> DiscGrid:
    """Centre, ``radii - 1`` inner circles, and the outer circle with ``angles`` points."""
    if not 0 < rho < 1:
        raise ValueError("rho must lie in (0, 1)")
    if angles < 64:
        raise ValueError("grid needs at least 64 angles")
    pts = [np.zeros(1, complex)]
    inner = np.exp(2j * np.pi * (np.arange(inner_angles) + 0.5) / inner_angles)
    for j in range(1, radii):
        pts.append(rho * j / radii * inner * np.exp(1j * j))
    outer = rho * np.exp(2j * np.pi * np.arange(angles) / angles)
    pts.append(outer)
    points = np.concatenate(pts)
    points.setflags(write=False)
    outer.setflags(write=False)
    return DiscGrid(rho, radii, angles, points, outer)


def _trim(c: np.ndarray, scale: float) -> np.ndarray:
    c = np.asarray(c, complex)
    k = c.size
    while k > 1 and abs(c[k - 1]) <= 1e-14 * scale:
        k -= 1
    return c[:k]


def removed_set_margin(removed: RemovedSet, disc: AnalyticDisc, rho: float) -> float:
    """Negative (or zero) when the disc restricted to |lam| <= rho meets the removed set.

    The intersection is found exactly: the disc meets the analytic curve
    where a polynomial (cleared of denominators) vanishes, and its roots are
    checked against the radius and the removed annulus.  Returns ``inf`` when
    there is no intersection.
    """
    nums, dens = disc.numerators, disc.denominators
    if removed.kind == "diagonal":
        residuals = [P.polysub(P.polymul(nums[0], dens[i]), P.polymul(nums[i], dens[0]))
                     for i in range(1, disc.dim)]
    else:
        bc = removed.b.conjugate()
        left = P.polymul(nums[0], P.polysub(dens[1], bc * nums[1]))
        right = P.polymul(dens[0], P.polysub(nums[1], removed.b * dens[1]))
        residuals = [P.polysub(left, right)]
    scale = max(float(np.max(np.abs(c))) for c in (*nums, *dens))
    live = [_trim(g, scale) for g in residuals]
    live = [g for g in live if not (g.size == 1 and abs(g[0]) <= 1e-13 * scale)]
    if not live:
        # the whole disc lies on the curve carrying the removed set
        s = np.abs(removed.parameter(disc(make_grid(rho).outer)))
        top = float(s.max())
        return -(top - removed.inner) if top >= removed.inner else math.inf
    anchor, others = live[0], live[1:]
    if anchor.size == 1:
        return math.inf
    best = math.inf
    for mu in P.polyroots(anchor):
        if abs(mu) > rho * (1 + 1e-9):
            continue
        if any(abs(P.polyval(mu, g)) > 1e-8 * scale * (1 + abs(mu)) ** g.size for g in others):
            continue
        if any(abs(P.polyval(mu, den)) < 1e-14 for den in dens):
            continue
        s = abs(complex(removed.parameter(disc(mu))))
        if removed.inner - 1e-12 <= s < 1.0:
            depth = max(0.0, min(s - removed.inner, 1.0 - s, rho - abs(mu)))
            best = min(best, -depth)
    return best


def containment_margin(domain: DomainSpec, disc: AnalyticDisc, rho: float = DEFAULT_RHO,
                       radii: int = 12, angles: int = 256) -> float:
    """``1 - max h(phi(lam))`` over the verification grid of radius rho.

    Positive means the disc is numerically admissible on ``|lam| <= rho``.
    For domains with a removed analytic set, an exact intersection makes the
    margin nonpositive.
    """
    grid = make_grid(float(rho), int(radii), int(angles))
    vals = disc(grid.points)
    g = domain.containment_gauge(vals)
    margin = 1.0 - float(np.max(g))
    if domain.removed is not None:
        margin = min(margin, removed_set_margin(domain.removed, disc, rho))
        if domain.removed.eps > 0 and np.any(domain.removed.contains(vals)):
            margin = min(margin, -domain.removed.eps)
    return margin


@dataclass(frozen=True, eq=False)
class DiscCertificate:
    """A disc admissible on |lam| <= rho with the parameters it was used at."""

    disc: AnalyticDisc
    rho: float
    margin: float
    grid: dict
    nodes: tuple[complex, complex] | None = None
    note: str = ""

    def to_dict(self) -> dict:
        out = {**self.disc.to_dict(), "rho": self.rho, "margin": self.margin, "grid": self.grid}
        if self.nodes is not None:
            out["nodes"] = [complex_to_json(x) for x in self.nodes]
        if self.note:
            out["note"] = self.note
        return out
