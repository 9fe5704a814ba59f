"""Sparse bivariate Laurent polynomials and truncated power series in t.

``LaurentPoly2`` holds one t-coefficient of a walk generating series: a
finite map from integer exponent pairs (i, j) to nonzero ring elements.
``TSeries`` stacks N+1 of them and is the carrier for every generating
series in the package.  Both types are immutable after construction and
all operations are pure functions, so values can be shared freely.

Truncation discipline: the truncation order is explicit data.  Arithmetic
on two series truncates to the minimum of the operand orders; multiplying
by t**k shifts the order by k.  Nothing truncates silently.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .rings import CoefficientRing


class Domain(enum.Enum):
    """A sign class of integer exponents (a half-line, point, or extreme)."""

    ALL = "all"
    EMPTY = "empty"
    POS = "pos"
    NEG = "neg"
    NONNEG = "nonneg"
    NONPOS = "nonpos"
    ZERO = "zero"

    def contains(self, k: int) -> bool:
        if self is Domain.ALL:
            return True
        if self is Domain.EMPTY:
            return False
        if self is Domain.POS:
            return k > 0
        if self is Domain.NEG:
            return k < 0
        if self is Domain.NONNEG:
            return k >= 0
        if self is Domain.NONPOS:
            return k <= 0
        return k == 0


class Axis(enum.Enum):
    X = "x"
    Y = "y"


@dataclass(frozen=True)
class SectionSpec:
    axis: Axis
    region: Domain


class GroupElement(enum.Enum):
    """The Klein four-group acting by x -> 1/x and/or y -> 1/y."""

    ID = (False, False)
    PHI = (True, False)
    PSI = (False, True)
    PHI_PSI = (True, True)

    @property
    def flips_x(self):
        return self.value[0]

    @property
    def flips_y(self):
        return self.value[1]

    def compose(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(
            (self.flips_x ^ other.flips_x, self.flips_y ^ other.flips_y)
        )


# alternating character on the four-group: +, -, -, +
GROUP_SIGNS = {
    GroupElement.ID: 1,
    GroupElement.PHI: -1,
    GroupElement.PSI: -1,
    GroupElement.PHI_PSI: 1,
}


def _check_same_ring(a, b):
    if a.ring != b.ring:
        raise ValueError(f"mixed coefficient rings: {a.ring} vs {b.ring}")


class LaurentPoly2:
    """Sparse Laurent polynomial in x, y over a coefficient ring.

    Canonical form: no stored zero coefficients, so equality is equality
    of the term maps.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring: CoefficientRing, terms=None, *, _canonical=False):
        self.ring = ring
        if terms is None:
            self.terms = {}
        elif _canonical:
            self.terms = terms
        else:
            self.terms = {
                ij: c for ij, c in dict(terms).items() if not ring.is_zero(c)
            }

    @classmethod
    def zero(cls, ring):
        return cls(ring, {}, _canonical=True)

    @classmethod
    def monomial(cls, ring, c, i: int, j: int):
        c = c if not isinstance(c, int) else ring.from_int(c)
        if ring.is_zero(c):
            return cls.zero(ring)
        return cls(ring, {(i, j): c}, _canonical=True)

    @classmethod
    def one(cls, ring):
        return cls.monomial(ring, 1, 0, 0)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, LaurentPoly2)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __add__(self, other):
        _check_same_ring(self, other)
        ring = self.ring
        out = dict(self.terms)
        for ij, c in other.terms.items():
            s = ring.add(out.get(ij, 0), c) if ij in out else c
            if ij in out and ring.is_zero(s):
                del out[ij]
            else:
                out[ij] = s
        return LaurentPoly2(ring, out, _canonical=True)

    def __neg__(self):
        ring = self.ring
        return LaurentPoly2(
            ring, {ij: ring.neg(c) for ij, c in self.terms.items()}, _canonical=True
        )

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        _check_same_ring(self, other)
        ring = self.ring
        add, mul, is_zero = ring.add, ring.mul, ring.is_zero
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out = {}
        for (i1, j1), c1 in a.items():
            for (i2, j2), c2 in b.items():
                ij = (i1 + i2, j1 + j2)
                prod = mul(c1, c2)
                if ij in out:
                    s = add(out[ij], prod)
                    if is_zero(s):
                        del out[ij]
                    else:
                        out[ij] = s
                elif not is_zero(prod):
                    out[ij] = prod
        return LaurentPoly2(ring, out, _canonical=True)

    def scale(self, c):
        ring = self.ring
        if isinstance(c, int):
            c = ring.from_int(c)
        if ring.is_zero(c):
            return LaurentPoly2.zero(ring)
        return LaurentPoly2(
            ring, {ij: ring.mul(v, c) for ij, v in self.terms.items()}
        )

    def shift(self, di: int, dj: int):
        """Multiply by the monomial x**di * y**dj."""
        return LaurentPoly2(
            self.ring,
            {(i + di, j + dj): c for (i, j), c in self.terms.items()},
            _canonical=True,
        )

    def section(self, axis: Axis, region: Domain):
        """Keep exactly the terms whose exponent on ``axis`` lies in ``region``."""
        k = 0 if axis is Axis.X else 1
        return LaurentPoly2(
            self.ring,
            {ij: c for ij, c in self.terms.items() if region.contains(ij[k])},
            _canonical=True,
        )

    def coeff(self, axis: Axis, e: int):
        """Coefficient of axis**e: terms with that exponent, exponent reset to 0."""
        if axis is Axis.X:
            out = {(0, j): c for (i, j), c in self.terms.items() if i == e}
        else:
            out = {(i, 0): c for (i, j), c in self.terms.items() if j == e}
        return LaurentPoly2(self.ring, out, _canonical=True)

    def act(self, g: GroupElement):
        """Substitute x -> 1/x and/or y -> 1/y as encoded by ``g``."""
        if g is GroupElement.ID:
            return self
        sx = -1 if g.flips_x else 1
        sy = -1 if g.flips_y else 1
        return LaurentPoly2(
            self.ring,
            {(sx * i, sy * j): c for (i, j), c in self.terms.items()},
            _canonical=True,
        )

    def swap_xy(self):
        return LaurentPoly2(
            self.ring,
            {(j, i): c for (i, j), c in self.terms.items()},
            _canonical=True,
        )

    def eval_ones(self):
        """Value at x = y = 1, i.e. the sum of all coefficients."""
        ring = self.ring
        s = ring.zero()
        for c in self.terms.values():
            s = ring.add(s, c)
        return s

    def support(self):
        return set(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for (i, j) in sorted(self.terms, key=lambda ij: (-ij[0] - ij[1], ij)):
            c = self.terms[(i, j)]
            mono = []
            if i:
                mono.append(f"x^{i}" if i != 1 else "x")
            if j:
                mono.append(f"y^{j}" if j != 1 else "y")
            m = "*".join(mono)
            if c == 1 and m:
                term = m
            elif c == -1 and m:
                term = f"-{m}"
            else:
                term = f"{c}*{m}" if m else f"{c}"
            bits.append(term)
        out = bits[0]
        for t in bits[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out


def step_polynomial(ring) -> LaurentPoly2:
    """x + y + 1/x + 1/y, the step generator of the simple walk."""
    one = ring.one()
    return LaurentPoly2(
        ring, {(1, 0): one, (-1, 0): one, (0, 1): one, (0, -1): one}, _canonical=True
    )


def orbit_sum(p: LaurentPoly2) -> LaurentPoly2:
    """Alternating sum of g(x*y*p) over the four-group."""
    xyp = p.shift(1, 1)
    out = LaurentPoly2.zero(p.ring)
    for g, sign in GROUP_SIGNS.items():
        term = xyp.act(g)
        out = out + (term if sign > 0 else -term)
    return out


class TSeries:
    """Power series in t, truncated after t**order, with LaurentPoly2 coefficients."""

    __slots__ = ("ring", "order", "coeffs")

    def __init__(self, ring, order: int, coeffs=None):
        if order < 0:
            raise ValueError("truncation order must be >= 0")
        self.ring = ring
        self.order = order
        if coeffs is None:
            coeffs = [LaurentPoly2.zero(ring) for _ in range(order + 1)]
        else:
            coeffs = list(coeffs)
            if len(coeffs) != order + 1:
                raise ValueError("coefficient list does not match order")
        self.coeffs = tuple(coeffs)

    @classmethod
    def zero(cls, ring, order):
        return cls(ring, order)

    @classmethod
    def from_poly(cls, p: LaurentPoly2, order: int):
        """Embed a t-free Laurent polynomial with the given truncation order."""
        coeffs = [p] + [LaurentPoly2.zero(p.ring) for _ in range(order)]
        return cls(p.ring, order, coeffs)

    def __getitem__(self, n: int) -> LaurentPoly2:
        return self.coeffs[n]

    def truncate(self, order: int) -> "TSeries":
        if order > self.order:
            raise ValueError(f"cannot extend truncation {self.order} to {order}")
        if order == self.order:
            return self
        return TSeries(self.ring, order, self.coeffs[: order + 1])

    def __eq__(self, other):
        return (
            isinstance(other, TSeries)
            and self.ring == other.ring
            and self.order == other.order
            and self.coeffs == other.coeffs
        )

    def __add__(self, other):
        _check_same_ring(self, other)
        n = min(self.order, other.order)
        return TSeries(
            self.ring, n, [self.coeffs[k] + other.coeffs[k] for k in range(n + 1)]
        )

    def __sub__(self, other):
        _check_same_ring(self, other)
        n = min(self.order, other.order)
        return TSeries(
            self.ring, n, [self.coeffs[k] - other.coeffs[k] for k in range(n + 1)]
        )

    def __neg__(self):
        return TSeries(self.ring, self.order, [-c for c in self.coeffs])

    def __mul__(self, other):
        _check_same_ring(self, other)
        n = min(self.order, other.order)
        out = [LaurentPoly2.zero(self.ring) for _ in range(n + 1)]
        for a in range(min(self.order, n) + 1):
            ca = self.coeffs[a]
            if ca.is_zero():
                continue
            for b in range(min(other.order, n - a) + 1):
                cb = other.coeffs[b]
                if cb.is_zero():
                    continue
                out[a + b] = out[a + b] + ca * cb
        return TSeries(self.ring, n, out)

    def mul_poly(self, p: LaurentPoly2):
        """Multiply by a t-free Laurent polynomial (truncation unchanged)."""
        return TSeries(self.ring, self.order, [c * p for c in self.coeffs])

    def scale(self, c):
        return TSeries(self.ring, self.order, [q.scale(c) for q in self.coeffs])

    def shift_t(self, k: int):
        """Multiply by t**k.  For k < 0 the dropped low coefficients must vanish."""
        if k == 0:
            return self
        if k > 0:
            coeffs = [LaurentPoly2.zero(self.ring)] * k + list(self.coeffs)
            return TSeries(self.ring, self.order + k, coeffs)
        if any(not c.is_zero() for c in self.coeffs[:-k]):
            raise ValueError(f"cannot divide by t**{-k}: low coefficients nonzero")
        return TSeries(self.ring, self.order + k, self.coeffs[-k:])

    def section(self, axis: Axis, region: Domain):
        return TSeries(self.ring, self.order, [c.section(axis, region) for c in self.coeffs])

    def coeff_of(self, axis: Axis, e: int):
        return TSeries(self.ring, self.order, [c.coeff(axis, e) for c in self.coeffs])

    def act(self, g: GroupElement):
        return TSeries(self.ring, self.order, [c.act(g) for c in self.coeffs])

    def swap_xy(self):
        return TSeries(self.ring, self.order, [c.swap_xy() for c in self.coeffs])

    def is_zero(self, through: int | None = None):
        n = self.order if through is None else min(through, self.order)
        return all(self.coeffs[k].is_zero() for k in range(n + 1))

    def first_nonzero(self):
        """(t-order, LaurentPoly2) of the first nonzero coefficient, or None."""
        for n, c in enumerate(self.coeffs):
            if not c.is_zero():
                return n, c
        return None

    def eval_ones(self):
        """Coefficient sequence of the specialization x = y = 1."""
        return [c.eval_ones() for c in self.coeffs]

    def inverse_unit(self):
        """Inverse of a series whose t^0 coefficient is an invertible monomial."""
        ring = self.ring
        lead = self.coeffs[0]
        if len(lead.terms) != 1:
            raise ValueError("leading coefficient is not a monomial")
        ((i0, j0), c0), = lead.terms.items()
        g0 = LaurentPoly2.monomial(ring, ring.inv(c0), -i0, -j0)
        out = [g0]
        for n in range(1, self.order + 1):
            acc = LaurentPoly2.zero(ring)
            for k in range(1, n + 1):
                if not self.coeffs[k].is_zero():
                    acc = acc + self.coeffs[k] * out[n - k]
            out.append(-(g0 * acc))
        return TSeries(ring, self.order, out)

    def __repr__(self):
        bits = [f"({c!r})*t^{n}" for n, c in enumerate(self.coeffs) if not c.is_zero()]
        body = " + ".join(bits) if bits else "0"
        return f"{body} + O(t^{self.order + 1})"


def geometric_kernel_series(order: int, ring) -> TSeries:
    """sum_{n<=order} S^n t^n, the truncated expansion of 1/(1 - S t)."""
    S = step_polynomial(ring)
    coeffs = [LaurentPoly2.one(ring)]
    for _ in range(order):
        coeffs.append(coeffs[-1] * S)
    return TSeries(ring, order, coeffs)
