"""Exact enumeration and series toolkit for lattice walks with
semipermeable axis barriers."""

from .rings import (
    QQ,
    ZZ,
    DEFAULT_PRIME,
    COLLISION_PRIME,
    CoefficientRing,
    ExactInteger,
    ExactRational,
    ModPrime,
    is_prime,
)
from .series import (
    Axis,
    Domain,
    GroupElement,
    LaurentPoly2,
    SectionSpec,
    TSeries,
    geometric_kernel_series,
    orbit_sum,
    step_polynomial,
)
from .models import (
    CellBudgetExceeded,
    DPLayer,
    ModelSpec,
    Region,
    dp_step,
    enumerate_series,
    initial_layer,
    matching_interpretation,
    model_catalog,
    returns_to_start,
    returns_via_series,
    totals,
    totals_via_series,
)

__all__ = [name for name in dir() if not name.startswith("_")]
