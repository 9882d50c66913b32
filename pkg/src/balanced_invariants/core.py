"""Scalar hyperbolic primitives on the unit disc and the value types built on them.

Distances live on two scales: the distance scale (artanh of a disc modulus)
and the starred scale ``tanh(distance)`` in ``[0, 1]``.  Every value that
leaves this package carries a :class:`BoundKind` so that upper and lower
bounds are never mixed up.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np


class BoundKind(str, enum.Enum):
    EXACT = "Exact"
    UPPER = "UpperBound"
    LOWER = "LowerBound"


def as_point(z: Any, dim: int | None = None) -> np.ndarray:
    """Coerce ``z`` to a 1-D complex vector, rejecting non-finite entries."""
    p = np.atleast_1d(np.asarray(z, dtype=complex))
    if p.ndim != 1 or p.size == 0:
        raise ValueError(f"a point must be a nonempty 1-D vector, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError("point coordinates must be finite")
    if dim is not None and p.size != dim:
        raise ValueError(f"expected a point in C^{dim}, got C^{p.size}")
    return p


def check_in_disc(lam: complex, name: str = "value") -> complex:
    lam = complex(lam)
    if not abs(lam) < 1.0:
        raise ValueError(f"{name} must lie in the open unit disc, got |{name}|={abs(lam)}")
    return lam


def star(x: float) -> float:
    """Map a distance-scale value to the starred scale; ``inf`` maps to 1."""
    x = float(x)
    if math.isnan(x) or x < 0:
        raise ValueError(f"star() needs a nonnegative distance, got {x}")
    if math.isinf(x):
        return 1.0
    return math.tanh(x)


def unstar(s: float) -> float:
    """Inverse of :func:`star`; 1 maps to ``inf``."""
    s = float(s)
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"starred values lie in [0, 1], got {s}")
    if s == 1.0:
        return math.inf
    return math.atanh(s)


def poincare_star(a: complex, b: complex) -> float:
    """Starred Poincare distance |a-b| / |1 - conj(a) b|."""
    a = check_in_disc(a, "a")
    b = check_in_disc(b, "b")
    den = abs(1.0 - a.conjugate() * b)
    return min(abs(a - b) / den, 1.0)


def poincare(a: complex, b: complex) -> float:
    """Poincare distance between two points of the unit disc."""
    return unstar(poincare_star(a, b))


def mobius(b: complex) -> Callable[[Any], Any]:
    """The disc automorphism ``lam -> (lam - b) / (1 - conj(b) lam)``.

    The returned map accepts scalars or numpy arrays.
    """
    b = check_in_disc(b, "b")
    bc = b.conjugate()

    def psi(lam):
        return (lam - b) / (1.0 - bc * lam)

    return psi


@dataclass(frozen=True)
class HyperbolicValue:
    """A starred-scale value with its bound direction.

    ``starred == 1`` encodes an infinite distance (a limit) or the trivial
    upper bound; anything else must lie in ``[0, 1)``.
    """

    starred: float
    kind: BoundKind

    def __post_init__(self):
        s = float(self.starred)
        if math.isnan(s) or not 0.0 <= s <= 1.0:
            raise ValueError(f"starred value must lie in [0, 1], got {s}")
        object.__setattr__(self, "starred", s)
        object.__setattr__(self, "kind", BoundKind(self.kind))

    @classmethod
    def from_distance(cls, d: float, kind: BoundKind) -> "HyperbolicValue":
        return cls(star(d), kind)

    @property
    def distance(self) -> float:
        return unstar(self.starred)

    def to_dict(self) -> dict:
        d = self.distance
        return {
            "value_starred": self.starred,
            "value_distance": d if math.isfinite(d) else "inf",
            "kind": self.kind.value,
        }


@dataclass(frozen=True)
class Bound:
    """A gauge-scale number (Minkowski values, metric lengths) with its bound kind."""

    value: float
    kind: BoundKind

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "kind", BoundKind(self.kind))

    def to_dict(self) -> dict:
        return {"value": self.value, "kind": self.kind.value}


def complex_to_json(z: Any) -> Any:
    """JSON-friendly form of a complex scalar or vector: ``[re, im]`` pairs."""
    arr = np.asarray(z, dtype=complex)
    if arr.ndim == 0:
        c = complex(arr)
        return [c.real, c.imag]
    return [complex_to_json(x) for x in arr]
