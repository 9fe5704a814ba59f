"""Positive-part closed forms and residual identities, as truncated series.

Every operation here evaluates a closed-form or identity on truncated
series and is meant to be cross-checked against the DP enumerator, which
is the independent ground truth.  Rational functions never appear as
such: each formula is a composition of monomials, section operators, and
multiplication by the geometric kernel series 1/(1 - S t).
"""

from __future__ import annotations

from .rings import CoefficientRing
from .series import (
    Axis,
    Domain,
    GroupElement,
    LaurentPoly2,
    TSeries,
    geometric_kernel_series,
    orbit_sum,
    step_polynomial,
)
from .models import ModelSpec, Region, enumerate_series, matching_interpretation

kernel_inverse_series = geometric_kernel_series


def _orbit_numerator(ring) -> LaurentPoly2:
    # xy - x/y... the alternating orbit of the unit monomial:
    # xy - (1/x)y - x(1/y) + (1/x)(1/y)
    return orbit_sum(LaurentPoly2.one(ring))


def orbit_sum_series(f: TSeries) -> TSeries:
    """Alternating group sum of x*y*f, per t-coefficient."""
    xy = LaurentPoly2.monomial(f.ring, 1, 1, 1)
    g = f.mul_poly(xy)
    return (
        g
        - g.act(GroupElement.PHI)
        - g.act(GroupElement.PSI)
        + g.act(GroupElement.PHI_PSI)
    )


def quarter_plane_q(order: int, ring) -> TSeries:
    """Quarter-plane series Q with x*y*Q = [x>][y>](orbit / (1 - S t))."""
    K = geometric_kernel_series(order, ring)
    inner = K.mul_poly(_orbit_numerator(ring))
    pos = inner.section(Axis.X, Domain.POS).section(Axis.Y, Domain.POS)
    return pos.mul_poly(LaurentPoly2.monomial(ring, 1, -1, -1))


def f_compartments_s2(order: int, ring):
    """The four compartment series of the all/all barrier model.

    F1 covers the open south-west quadrant (a reflected quarter-plane
    count), F2/F3 the side compartments, F4 the closed north-east
    quadrant; their sum is the full generating series.
    """
    K = geometric_kernel_series(order, ring)
    os_num = _orbit_numerator(ring)
    xbar_ybar = LaurentPoly2.monomial(ring, 1, -1, -1)
    ybar = LaurentPoly2.monomial(ring, 1, 0, -1)
    y_minus_ybar = LaurentPoly2(ring, {(0, 1): ring.one(), (0, -1): ring.neg(ring.one())})

    q = quarter_plane_q(order, ring)
    f1 = q.act(GroupElement.PHI_PSI).mul_poly(xbar_ybar)

    # F2 = t ybar [x<]( ([y>]((y - ybar)/(1-St))) * ([ybar](orbit/(1-St))) )
    a = K.mul_poly(y_minus_ybar).section(Axis.Y, Domain.POS)
    b = K.mul_poly(os_num).coeff_of(Axis.Y, -1)
    f2 = (
        (a * b)
        .section(Axis.X, Domain.NEG)
        .mul_poly(ybar)
        .shift_t(1)
        .truncate(order)
    )
    f3 = f2.swap_xy()

    # F4 = xbar ybar t [x>][y>]( orbit-sum-combination of G / (1-St) ),
    # G = x y ([xbar]F2 + [ybar]F3)
    xy = LaurentPoly2.monomial(ring, 1, 1, 1)
    g = (f2.coeff_of(Axis.X, -1) + f3.coeff_of(Axis.Y, -1)).mul_poly(xy)
    orb = (
        g
        - g.act(GroupElement.PHI)
        - g.act(GroupElement.PSI)
        + g.act(GroupElement.PHI_PSI)
    )
    f4 = (
        (orb * K)
        .section(Axis.X, Domain.POS)
        .section(Axis.Y, Domain.POS)
        .mul_poly(xbar_ybar)
        .shift_t(1)
        .truncate(order)
    )
    return f1, f2, f3, f4


def f4_explicit_s2(order: int, ring) -> TSeries:
    """The fully expanded form of the fourth compartment, for cross-checks."""
    K = geometric_kernel_series(order, ring)
    os_num = _orbit_numerator(ring)
    xbar_ybar = LaurentPoly2.monomial(ring, 1, -1, -1)
    y_minus_ybar = LaurentPoly2(ring, {(0, 1): ring.one(), (0, -1): ring.neg(ring.one())})
    x_minus_xbar = LaurentPoly2(ring, {(1, 0): ring.one(), (-1, 0): ring.neg(ring.one())})

    b = K.mul_poly(os_num).coeff_of(Axis.Y, -1)  # [ybar](orbit/(1-St))
    c = K.mul_poly(os_num).coeff_of(Axis.X, -1)  # [xbar](orbit/(1-St))
    pos_x = K.mul_poly(x_minus_xbar).section(Axis.X, Domain.POS)
    pos_y = K.mul_poly(y_minus_ybar).section(Axis.Y, Domain.POS)

    inner1 = ((b.mul_poly(y_minus_ybar)) * K).coeff_of(Axis.X, -1)
    term1 = (inner1 * pos_x).section(Axis.Y, Domain.POS)
    inner2 = ((c.mul_poly(x_minus_xbar)) * K).coeff_of(Axis.Y, -1)
    term2 = (inner2 * pos_y).section(Axis.X, Domain.POS)
    return (term1 + term2).mul_poly(xbar_ybar).shift_t(2).truncate(order)


def f2_s3(
    order: int,
    f1: TSeries,
    ring,
    reading: str = "substitute-then-section",
) -> TSeries:
    """Quadrant compartment of the nonneg/nonneg barrier model from its
    three-quarter-plane part f1.

    ``reading`` fixes how the nonpositive section at the reflected
    argument is taken: substitute y -> 1/y first and then section
    (the default, validated against the enumerator), or section first.
    """
    if f1.order < order:
        raise ValueError(f"f1 truncated at {f1.order}, need at least {order}")
    K = geometric_kernel_series(order, ring)
    xbar_ybar = LaurentPoly2.monomial(ring, 1, -1, -1)
    ybar = LaurentPoly2.monomial(ring, 1, 0, -1)
    y = LaurentPoly2.monomial(ring, 1, 0, 1)
    xbar_minus_x = LaurentPoly2(ring, {(-1, 0): ring.one(), (1, 0): ring.neg(ring.one())})

    if reading == "substitute-then-section":
        refl = f1.act(GroupElement.PSI).section(Axis.Y, Domain.NONPOS)
    elif reading == "section-then-substitute":
        refl = f1.section(Axis.Y, Domain.NONPOS).act(GroupElement.PSI)
    else:
        raise ValueError(f"unknown reading {reading!r}")
    inner = refl.mul_poly(ybar) - f1.section(Axis.Y, Domain.NONNEG).mul_poly(y)
    h = inner.coeff_of(Axis.X, -1).mul_poly(xbar_minus_x)
    both = h + h.swap_xy()
    return (
        (both * K)
        .section(Axis.X, Domain.POS)
        .section(Axis.Y, Domain.POS)
        .mul_poly(xbar_ybar)
        .shift_t(1)
        .truncate(order)
    )


def diag_sections(f: TSeries):
    """Split into diagonal (i = j >= 0), lower (i >= 0, j <= i-1) and
    upper (the mirror) parts.  They partition f when f has no support in
    the open south-west quadrant."""
    ring = f.ring
    d_coeffs, l_coeffs, u_coeffs = [], [], []
    for c in f.coeffs:
        d, lo, up = {}, {}, {}
        for (i, j), v in c.terms.items():
            if i == j and i >= 0:
                d[(i, j)] = v
            elif i >= 0 and j <= i - 1:
                lo[(i, j)] = v
            elif j >= 0 and i <= j - 1:
                up[(i, j)] = v
        d_coeffs.append(LaurentPoly2(ring, d, _canonical=True))
        l_coeffs.append(LaurentPoly2(ring, lo, _canonical=True))
        u_coeffs.append(LaurentPoly2(ring, up, _canonical=True))
    n = f.order
    return (
        TSeries(ring, n, d_coeffs),
        TSeries(ring, n, l_coeffs),
        TSeries(ring, n, u_coeffs),
    )


def kernel_root_x(order: int, ring) -> TSeries:
    """The power-series root X(y,t) of the kernel: X = t (X^2 + (y + 1/y) X + 1).

    Each fixed-point sweep gains one t-order, so ``order`` sweeps pin all
    returned coefficients; the t^1 coefficient is 1 and t^2 is y + 1/y.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    y_plus_ybar = LaurentPoly2(ring, {(0, 1): ring.one(), (0, -1): ring.one()})
    one = TSeries.from_poly(LaurentPoly2.one(ring), order)
    x = TSeries.zero(ring, order)
    for _ in range(order):
        x = (x * x + x.mul_poly(y_plus_ybar) + one).shift_t(1).truncate(order)
    return x


def kernel_root_residual(x: TSeries, ring) -> TSeries:
    """1 - S(X, y) t evaluated on the root; zero through the valid order.

    t/X is a unit power series since X = t + O(t^2), so the result is an
    honest power series; its truncation drops one order from x's.
    """
    order = x.order
    y_plus_ybar = LaurentPoly2(ring, {(0, 1): ring.one(), (0, -1): ring.one()})
    one = TSeries.from_poly(LaurentPoly2.one(ring), order)
    t_over_x = x.shift_t(-1).inverse_unit()  # (X/t)^(-1) = t/X
    st = (
        x.shift_t(1).truncate(order)
        + TSeries.from_poly(y_plus_ybar, order - 1).shift_t(1)
        + t_over_x
    )
    return one - st


def kernel_root_poly_residual(x: TSeries, ring) -> TSeries:
    """X - t (X^2 + (y + 1/y) X + 1): the defining fixed point, zero through
    the full truncation of x."""
    order = x.order
    y_plus_ybar = LaurentPoly2(ring, {(0, 1): ring.one(), (0, -1): ring.one()})
    one = TSeries.from_poly(LaurentPoly2.one(ring), order)
    rhs = (x * x + x.mul_poly(y_plus_ybar) + one).shift_t(1).truncate(order)
    return x - rhs


def substitute_x(f: TSeries, x: TSeries) -> TSeries:
    """Evaluate f at x -> X(y,t) by monomial substitution.

    Valid because X = O(t): a term x^i y^j t^n only contributes from
    t-order n + i on, so the truncated input pins the truncated output.
    Requires nonnegative x-exponents in f.
    """
    ring = f.ring
    order = min(f.order, x.order)
    out = TSeries.zero(ring, order)
    powers = {0: TSeries.from_poly(LaurentPoly2.one(ring), order)}
    max_i = 0
    for n, c in enumerate(f.coeffs[: order + 1]):
        for (i, j), v in c.terms.items():
            if i < 0:
                raise ValueError("substitution needs nonnegative x-exponents")
            while max_i < i:
                powers[max_i + 1] = (powers[max_i] * x).truncate(order)
                max_i += 1
            term = powers[i].mul_poly(LaurentPoly2.monomial(ring, v, 0, j))
            out = out + term.shift_t(n).truncate(order)
    return out


def _neg_neg_sections(order: int, ring, start):
    m = ModelSpec(start, Domain.NEG, Domain.NEG)
    f = enumerate_series(m, order, ring)
    f1 = f.section(Axis.X, Domain.NEG).section(Axis.Y, Domain.NEG)
    f2 = f - f1
    d, lo, up = diag_sections(f2)
    return f1, f2, d, lo, up


def star_residual(order: int, ring, start=(-1, -1), drop_diagonal=False) -> TSeries:
    """Residual of the diagonal-elimination identity on the neg/neg model:

        (1 - S t) L - t [1/x]F1 - (t x + t/y - 1/2) D + t (1/x) [x^0]L

    computed entirely from enumerator sections; zero for the symmetric
    start, nonzero in general otherwise.  Needs a ring containing 1/2.
    ``drop_diagonal`` replaces D by zero, a power check for the tests.
    """
    if not ring.has_half:
        raise ValueError(f"ring {ring} has no 1/2; use rationals or an odd prime")
    half = ring.half()
    f1, _f2, d, lo, _up = _neg_neg_sections(order, ring, start)
    if drop_diagonal:
        d = TSeries.zero(ring, order)
    S = step_polynomial(ring)
    x_plus_ybar = LaurentPoly2(ring, {(1, 0): ring.one(), (0, -1): ring.one()})
    xbar = LaurentPoly2.monomial(ring, 1, -1, 0)

    lhs = lo - lo.mul_poly(S).shift_t(1).truncate(order)
    t_xbar_f1 = f1.coeff_of(Axis.X, -1).shift_t(1).truncate(order)
    mid = d.mul_poly(x_plus_ybar).shift_t(1).truncate(order) - d.scale(half)
    x0l = lo.section(Axis.X, Domain.ZERO).mul_poly(xbar).shift_t(1).truncate(order)
    return lhs - t_xbar_f1 - mid + x0l


def x0_f2l_identity(order: int, ring, start=(-1, -1), perturb_root=False) -> TSeries:
    """Residual of the kernel-root elimination for [x^0]L on the neg/neg model:

        [x^0]L = X [1/x]F1 + X (X + 1/y - 1/(2t)) D(X, y, t).

    ``perturb_root`` adds t^2 to the root, which must break the identity
    (a power check for the test harness).
    """
    if not ring.has_half:
        raise ValueError(f"ring {ring} has no 1/2; use rationals or an odd prime")
    half = ring.half()
    f1, _f2, d, lo, _up = _neg_neg_sections(order, ring, start)
    x = kernel_root_x(order, ring)
    if perturb_root:
        x = x + TSeries.from_poly(LaurentPoly2.one(ring), order - 2).shift_t(2)
    ybar = LaurentPoly2.monomial(ring, 1, 0, -1)

    lhs = lo.section(Axis.X, Domain.ZERO)
    d_at_root = substitute_x(d, x)
    xd = x * d_at_root
    rhs = (
        x * f1.coeff_of(Axis.X, -1)
        + (xd * x)
        + xd.mul_poly(ybar)
        - xd.scale(half).shift_t(-1)
    )
    return lhs - rhs


def verify_functional_equation(
    m: ModelSpec,
    interp: tuple[Domain, Domain],
    order: int,
    ring,
    f: TSeries | None = None,
) -> TSeries:
    """Residual of the master functional equation with the boundary terms
    read through the given section pair (y-domain for the x^0 term,
    x-domain for the y^0 term); zero iff the interpretation matches."""
    if f is None:
        f = enumerate_series(m, order, ring)
    else:
        f = f.truncate(order)
    ydom, xdom = interp
    S = step_polynomial(ring)
    start = TSeries.from_poly(LaurentPoly2.monomial(ring, 1, *m.start), order)
    xbar = LaurentPoly2.monomial(ring, 1, -1, 0)
    ybar = LaurentPoly2.monomial(ring, 1, 0, -1)
    lhs = f - f.mul_poly(S).shift_t(1).truncate(order)
    west_term = (
        f.section(Axis.X, Domain.ZERO)
        .section(Axis.Y, ydom)
        .mul_poly(xbar)
        .shift_t(1)
        .truncate(order)
    )
    south_term = (
        f.section(Axis.Y, Domain.ZERO)
        .section(Axis.X, xdom)
        .mul_poly(ybar)
        .shift_t(1)
        .truncate(order)
    )
    return lhs - start + west_term + south_term


def interpretation_for(m: ModelSpec) -> tuple[Domain, Domain]:
    """The section pair under which the model's series solves the equation."""
    return matching_interpretation(m)
