"""Numerical bounds for invariant pseudodistances and metrics on balanced domains in C^n.

Upper bounds come from certified analytic discs, lower bounds from
holomorphic competitors; every value carries its :class:`BoundKind`.
"""

from .core import Bound, BoundKind, HyperbolicValue, mobius, poincare, poincare_star, star, unstar
from .discs import AnalyticDisc, containment_margin, interpolating_disc, polynomial_disc
from .domains import (
    CATALOG,
    DomainSpec,
    Pseudoconvex,
    balancedness_check,
    bisect_gauge,
    hull_minkowski,
    make_domain,
    minkowski,
    pseudoconvexity_probe,
)
from .metrics import (
    caratheodory_monomial_lower,
    kobayashi_upper,
    kr2_upper,
    kr_upper,
    lempert_upper,
    m_lempert_upper,
)
from .optim import OptimizerBudget

__version__ = "0.1.0"

__all__ = [
    "AnalyticDisc", "Bound", "BoundKind", "CATALOG", "DomainSpec", "HyperbolicValue", "OptimizerBudget",
    "Pseudoconvex", "balancedness_check", "bisect_gauge", "caratheodory_monomial_lower", "containment_margin",
    "hull_minkowski", "interpolating_disc", "kobayashi_upper", "kr2_upper", "kr_upper", "lempert_upper",
    "m_lempert_upper", "make_domain", "minkowski", "mobius", "poincare", "poincare_star",
    "polynomial_disc", "pseudoconvexity_probe", "star", "unstar",
]
