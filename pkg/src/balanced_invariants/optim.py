"""Budgets and a multi-start Nelder-Mead driver shared by the search routines."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import minimize


@dataclass(frozen=True)
class OptimizerBudget:
    """Search budget for every optimizer-backed bound.

    ``rho`` is the radius on which discs are certified, ``radii``/``angles``
    the verification grid, ``margin`` the strict-containment slack.
    """

    restarts: int = 32
    max_iterations: int = 2000
    degree: int = 8
    seed: int = 0
    rho: float = 0.995
    radii: int = 12
    angles: int = 256
    margin: float = 1e-9

    def __post_init__(self):
        for name in ("restarts", "max_iterations", "degree", "radii", "angles"):
            if getattr(self, name) < 1:
                raise ValueError(f"budget field {name} must be positive")
        if not 0.0 < self.rho < 1.0:
            raise ValueError("rho must lie in (0, 1)")
        if self.angles < 64:
            raise ValueError("the verification grid needs at least 64 angles")
        if self.margin <= 0:
            raise ValueError("margin must be positive")

    def replace(self, **changes) -> "OptimizerBudget":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


HULL_BUDGET = OptimizerBudget(restarts=16)


def restart_rng(seed: int, *stream: int) -> np.random.Generator:
    """Independent deterministic generator for one restart (seed combined with the stream ids)."""
    return np.random.default_rng([int(seed), *map(int, stream)])


class BestTracker:
    """Wraps an objective and remembers the best *feasible* point it ever saw.

    ``fun`` returns ``(value, feasible)``; the wrapped callable returns the
    penalized scalar that Nelder-Mead sees.
    """

    def __init__(self, fun: Callable[[np.ndarray], tuple[float, bool, float]]):
        self._fun = fun
        self.best_value = np.inf
        self.best_x: np.ndarray | None = None
        self.evaluations = 0

    def __call__(self, x: np.ndarray) -> float:
        self.evaluations += 1
        value, feasible, penalized = self._fun(x)
        if feasible and value < self.best_value:
            self.best_value = value
            self.best_x = np.array(x, copy=True)
        return penalized

    def offer(self, x: np.ndarray) -> float:
        return self(np.asarray(x, dtype=float))


def nelder_mead(
    fun: Callable[[np.ndarray], float],
    x0: np.ndarray,
    steps: np.ndarray | float,
    max_iterations: int,
) -> bool:
    """Run one adaptive Nelder-Mead search from ``x0``; returns the convergence flag.

    ``max_iterations`` caps both simplex iterations and function evaluations.

    The simplex is built explicitly from per-coordinate ``steps`` because the
    scipy default barely moves zero-valued coordinates.
    """
    x0 = np.asarray(x0, dtype=float)
    steps = np.broadcast_to(np.asarray(steps, dtype=float), x0.shape)
    simplex = np.vstack([x0, x0 + np.diag(steps)])
    res = minimize(
        fun,
        x0,
        method="Nelder-Mead",
        options={
            "initial_simplex": simplex,
            "maxiter": int(max_iterations),
            "maxfev": int(max_iterations),
            "xatol": 1e-11,
            "fatol": 1e-12,
            "adaptive": x0.size > 4,
        },
    )
    return bool(res.success)


def complex_to_real(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex).ravel()
    return np.column_stack([z.real, z.imag]).ravel()


def real_to_complex(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return x[0::2] + 1j * x[1::2]
