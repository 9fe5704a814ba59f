"""Walk models with semipermeable axis barriers and the DP enumerator.

A model fixes the simple step set {E, W, N, S} and forbids
  * west steps taken from column x = 0 while the y-coordinate lies in the
    west barrier domain,
  * south steps taken from row y = 0 while the x-coordinate lies in the
    south barrier domain,
  * any step that leaves the region constraint (quarter plane, or the
    complement of the closed north-east quadrant).

Barriers attach to the position *before* the step, so an axis can be
crossed in one direction only.  The dict-based enumerator in this module
is the ground-truth oracle for the whole package; the dense fast paths in
``dpgrid`` must reproduce it bit for bit.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .rings import CoefficientRing, ModPrime, ExactRational, is_prime
from .series import Domain, LaurentPoly2, TSeries

STEPS = {"E": (1, 0), "W": (-1, 0), "N": (0, 1), "S": (0, -1)}


class Region(enum.Enum):
    FULL_PLANE = "full-plane"
    QUARTER_PLANE = "quarter-plane"
    AVOID_NONNEG_QUADRANT = "avoid-nonneg-quadrant"

    def contains(self, i: int, j: int) -> bool:
        if self is Region.FULL_PLANE:
            return True
        if self is Region.QUARTER_PLANE:
            return i >= 0 and j >= 0
        return not (i >= 0 and j >= 0)


class CellBudgetExceeded(RuntimeError):
    """Raised when an enumeration would exceed the configured cell budget."""


@dataclass(frozen=True)
class ModelSpec:
    """One barrier interpretation: start point, barrier domains, region."""

    start: tuple[int, int]
    west_barrier: Domain = Domain.EMPTY
    south_barrier: Domain = Domain.EMPTY
    region: Region = Region.FULL_PLANE
    name: str = "custom"

    def __post_init__(self):
        s1, s2 = self.start
        if not self.region.contains(s1, s2):
            raise ValueError(f"start {self.start} violates region {self.region.value}")

    @property
    def degenerate_start(self) -> bool:
        """Start sits on a barrier line, so barrier rules apply from step one."""
        s1, s2 = self.start
        return (s1 == 0 and self.west_barrier.contains(s2)) or (
            s2 == 0 and self.south_barrier.contains(s1)
        )

    def step_allowed(self, i: int, j: int, step: str) -> bool:
        if step == "W" and i == 0 and self.west_barrier.contains(j):
            return False
        if step == "S" and j == 0 and self.south_barrier.contains(i):
            return False
        di, dj = STEPS[step]
        return self.region.contains(i + di, j + dj)


def model_catalog() -> dict[str, ModelSpec]:
    """The named model instances used throughout the package."""
    mk = ModelSpec
    return {
        "S2": mk((-1, -1), Domain.ALL, Domain.ALL, Region.FULL_PLANE, "S2"),
        "S3": mk((-1, -1), Domain.NONNEG, Domain.NONNEG, Region.FULL_PLANE, "S3"),
        "S4a": mk((-1, -1), Domain.NEG, Domain.NEG, Region.FULL_PLANE, "S4a"),
        "S4b": mk((-1, -1), Domain.NONPOS, Domain.NONPOS, Region.FULL_PLANE, "S4b"),
        "S5": mk((-1, -1), Domain.POS, Domain.POS, Region.FULL_PLANE, "S5"),
        "QP": mk((0, 0), Domain.EMPTY, Domain.EMPTY, Region.QUARTER_PLANE, "QP"),
        "TQP": mk((-1, -1), Domain.EMPTY, Domain.EMPTY, Region.AVOID_NONNEG_QUADRANT, "TQP"),
    }


@dataclass(frozen=True)
class DPLayer:
    """Counts of admissible length-n walks from the start, by endpoint."""

    n: int
    counts: dict


def initial_layer(m: ModelSpec, ring: CoefficientRing) -> DPLayer:
    return DPLayer(0, {m.start: ring.one()})


def dp_step(layer: DPLayer, m: ModelSpec, ring: CoefficientRing) -> DPLayer:
    out: dict = {}
    add = ring.add
    for (i, j), c in layer.counts.items():
        for step, (di, dj) in STEPS.items():
            if not m.step_allowed(i, j, step):
                continue
            ij = (i + di, j + dj)
            if ij in out:
                out[ij] = add(out[ij], c)
            else:
                out[ij] = c
    return DPLayer(layer.n + 1, out)


DEFAULT_CELL_BUDGET = 300_000_000


def _check_budget(cells: int, budget: int | None):
    if budget is None:
        budget = DEFAULT_CELL_BUDGET
    if cells > budget:
        raise CellBudgetExceeded(
            f"enumeration needs about {cells} cells, over the budget of {budget}; "
            "raise SEMIPERM_CELL_BUDGET to allow it"
        )


def dp_layers(m: ModelSpec, order: int, ring, budget: int | None = None):
    """All layers 0..order.  Cost grows cubically; guarded by the cell budget."""
    _check_budget((order + 1) * (2 * order + 1) ** 2 // 2, budget)
    layers = [initial_layer(m, ring)]
    for _ in range(order):
        layers.append(dp_step(layers[-1], m, ring))
    return layers


def enumerate_series(m: ModelSpec, order: int, ring, budget: int | None = None) -> TSeries:
    """Generating series: coefficient of x^i y^j t^n counts walks to (i, j)."""
    layers = dp_layers(m, order, ring, budget)
    coeffs = [LaurentPoly2(ring, layer.counts) for layer in layers]
    return TSeries(ring, order, coeffs)


def totals_via_series(m: ModelSpec, order: int, ring, budget: int | None = None):
    """Reference totals straight from the dict enumerator (small orders)."""
    layers = dp_layers(m, order, ring, budget)
    out = []
    for layer in layers:
        s = ring.zero()
        for c in layer.counts.values():
            s = ring.add(s, c)
        out.append(s)
    return out


def returns_via_series(m: ModelSpec, order: int, ring, budget: int | None = None):
    layers = dp_layers(m, order, ring, budget)
    return [layer.counts.get(m.start, ring.zero()) for layer in layers]


# -- fast-path dispatch ----------------------------------------------------
#
# Totals and return counts never need the Laurent coefficients, so for the
# scales used in the experiments they run on dense parity-packed arrays
# (see dpgrid).  Modular rings run one pass; the exact rings run one pass
# per CRT prime and reconstruct.

def totals(m: ModelSpec, order: int, ring, budget: int | None = None):
    if isinstance(ring, ModPrime):
        from . import dpgrid

        return list(dpgrid.totals_mod(m, order, ring.p, budget=budget))
    vals = _exact_values(m, order, "totals", budget)
    if isinstance(ring, ExactRational):
        return [ring.from_int(v) for v in vals]
    return vals


def returns_to_start(m: ModelSpec, order: int, ring, budget: int | None = None):
    if isinstance(ring, ModPrime):
        from . import dpgrid

        return list(dpgrid.returns_mod(m, order, ring.p, budget=budget))
    vals = _exact_values(m, order, "returns", budget)
    if isinstance(ring, ExactRational):
        return [ring.from_int(v) for v in vals]
    return vals


def _crt_primes(order: int):
    """Primes under 2**25 whose product exceeds 4**order, the count bound.

    Staying under 2**25 keeps every CRT pass on the int32 kernel with
    fused Barrett reduction, the fastest path in dpgrid.
    """
    need_bits = 2 * order + 1
    primes = []
    bits = 0
    p = 2**25 - 1
    while bits < need_bits:
        while not is_prime(p):
            p -= 2
        primes.append(p)
        bits += p.bit_length() - 1
        p -= 2
    return primes


def _exact_values(m: ModelSpec, order: int, kind: str, budget: int | None = None):
    from . import dpgrid

    primes = _crt_primes(order)
    fn = dpgrid.totals_mod if kind == "totals" else dpgrid.returns_mod
    residues = [fn(m, order, p, budget=budget) for p in primes]
    return _crt_combine(primes, residues)


def _crt_combine(primes, residues):
    """Garner-style incremental CRT, one Python-int pass per prime."""
    n_vals = len(residues[0])
    vals = [int(r) for r in residues[0]]
    modulus = primes[0]
    for p, res in zip(primes[1:], residues[1:]):
        inv = pow(modulus % p, -1, p)
        for k in range(n_vals):
            delta = (int(res[k]) - vals[k]) % p
            vals[k] = vals[k] + modulus * ((delta * inv) % p)
        modulus *= p
    return vals


def matching_interpretation(m: ModelSpec):
    """Section domains that read F(0,y,t) and F(x,0,t) for this model.

    The quarter-plane region forbids exactly the west steps from column 0
    and the south steps from row 0, so it reads as the all/all pair.
    """
    if m.region is Region.QUARTER_PLANE:
        return (Domain.ALL, Domain.ALL)
    return (m.west_barrier, m.south_barrier)
