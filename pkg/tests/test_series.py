import pytest
from hypothesis import given, settings, strategies as st

from semiperm.rings import QQ, ZZ, ModPrime
from semiperm.series import (
    Axis,
    Domain,
    GroupElement,
    LaurentPoly2,
    TSeries,
    geometric_kernel_series,
    orbit_sum,
    step_polynomial,
)

GF = ModPrime(45007)


def mono(c, i, j, ring=ZZ):
    return LaurentPoly2.monomial(ring, c, i, j)


def poly(*terms, ring=ZZ):
    out = LaurentPoly2.zero(ring)
    for c, i, j in terms:
        out = out + mono(c, i, j, ring)
    return out


# ---------------------------------------------------------------- laurent


def test_mul_difference_of_squares():
    a = poly((1, 1, 0), (1, -1, 0))  # x + 1/x
    b = poly((1, 1, 0), (-1, -1, 0))  # x - 1/x
    assert a * b == poly((1, 2, 0), (-1, -2, 0))


def test_mul_identity_and_inverse_monomials():
    S = step_polynomial(ZZ)
    assert S * LaurentPoly2.one(ZZ) == S
    assert mono(1, -1, -1) * mono(1, 1, 1) == LaurentPoly2.one(ZZ)


def test_mixed_rings_rejected():
    with pytest.raises(ValueError):
        mono(1, 0, 0, ZZ) * mono(1, 0, 0, QQ)
    with pytest.raises(ValueError):
        mono(1, 0, 0, ZZ) + mono(1, 0, 0, GF)


def test_zero_terms_dropped():
    p = LaurentPoly2(ZZ, {(0, 0): 1, (1, 1): 0})
    assert p == LaurentPoly2.one(ZZ)
    assert (p - p).is_zero()


def test_section_sign_of_exponent():
    p = poly((1, 1, 1), (-1, -1, 1), (-1, 1, -1), (1, -1, -1))
    assert p.section(Axis.X, Domain.POS) == poly((1, 1, 1), (-1, 1, -1))


def test_section_idempotent():
    p = step_polynomial(ZZ)
    s = p.section(Axis.X, Domain.POS)
    assert s.section(Axis.X, Domain.POS) == s


def test_section_central_term_of_s_squared():
    # brute-forced: the 2-step returns of the unrestricted walk are EW, WE, NS, SN
    k = geometric_kernel_series(2, ZZ)
    central = k[2].section(Axis.X, Domain.ZERO).section(Axis.Y, Domain.ZERO)
    assert central == mono(4, 0, 0)


def test_coeff_of():
    assert mono(1, -1, -1).coeff(Axis.X, -1) == mono(1, 0, -1)
    S = step_polynomial(ZZ)
    assert S.coeff(Axis.X, 1) == LaurentPoly2.one(ZZ)
    S2 = S * S
    assert S2.coeff(Axis.X, 0) == poly((1, 0, 2), (4, 0, 0), (1, 0, -2))


def test_group_action_examples():
    assert mono(1, 1, 1).act(GroupElement.PHI) == mono(1, -1, 1)
    assert mono(1, -1, -1).act(GroupElement.PHI_PSI) == mono(1, 1, 1)
    S = step_polynomial(ZZ)
    assert S.act(GroupElement.PHI) == S


@given(
    st.sampled_from(list(GroupElement)),
    st.sampled_from(list(GroupElement)),
    st.dictionaries(
        st.tuples(st.integers(-4, 4), st.integers(-4, 4)),
        st.integers(-9, 9),
        max_size=6,
    ),
)
def test_group_action_is_action(g, h, terms):
    p = LaurentPoly2(ZZ, terms)
    assert p.act(h).act(g) == p.act(g.compose(h))


def test_group_composition_table():
    assert GroupElement.PHI.compose(GroupElement.PHI) is GroupElement.ID
    assert GroupElement.PHI.compose(GroupElement.PSI) is GroupElement.PHI_PSI
    assert GroupElement.PHI_PSI.compose(GroupElement.PHI_PSI) is GroupElement.ID


# ------------------------------------------------------------- orbit sums


def test_orbit_sum_of_one():
    assert orbit_sum(LaurentPoly2.one(ZZ)) == poly(
        (1, 1, 1), (-1, -1, 1), (-1, 1, -1), (1, -1, -1)
    )


def test_orbit_sum_vanishing_starts():
    assert orbit_sum(mono(1, -1, -1)).is_zero()
    assert orbit_sum(mono(1, -1, 1)).is_zero()


def test_orbit_sum_respects_symmetric_rescaling():
    S = step_polynomial(ZZ)
    sym = S * S + poly((1, 1, 0), (1, -1, 0))
    for start in ((-1, -1), (-1, 1), (0, 0)):
        p = mono(1, *start)
        zero_before = orbit_sum(p).is_zero()
        zero_after = orbit_sum(sym * p).is_zero()
        assert zero_before == zero_after


# ----------------------------------------------------------------- series


def test_section_partition_of_axis():
    f = geometric_kernel_series(5, ZZ)
    parts = [
        f.section(Axis.X, Domain.POS),
        f.section(Axis.X, Domain.ZERO),
        f.section(Axis.X, Domain.NEG),
    ]
    total = parts[0] + parts[1] + parts[2]
    assert total == f


@settings(max_examples=30)
@given(
    st.dictionaries(
        st.tuples(st.integers(-3, 3), st.integers(-3, 3)),
        st.integers(-5, 5),
        max_size=5,
    ),
    st.sampled_from([Axis.X, Axis.Y]),
)
def test_section_partition_random(terms, axis):
    p = LaurentPoly2(ZZ, terms)
    total = (
        p.section(axis, Domain.POS)
        + p.section(axis, Domain.ZERO)
        + p.section(axis, Domain.NEG)
    )
    assert total == p


def test_truncation_takes_minimum():
    a = geometric_kernel_series(5, ZZ)
    b = geometric_kernel_series(3, ZZ)
    assert (a + b).order == 3
    assert (a * b).order == 3
    assert a.mul_poly(step_polynomial(ZZ)).order == 5


def test_shift_t():
    a = geometric_kernel_series(3, ZZ)
    up = a.shift_t(2)
    assert up.order == 5
    assert up[0].is_zero() and up[2] == a[0]
    assert up.shift_t(-2) == a
    with pytest.raises(ValueError):
        a.shift_t(-1)


def test_inverse_unit():
    k = geometric_kernel_series(8, ZZ)
    inv = k.inverse_unit()
    one = TSeries.from_poly(LaurentPoly2.one(ZZ), 8)
    assert k * inv == one
    # (1 - S t) is the inverse of the geometric series
    S = step_polynomial(ZZ)
    expect = TSeries.from_poly(LaurentPoly2.one(ZZ), 8) - TSeries.from_poly(S, 8).shift_t(1).truncate(8)
    assert inv == expect


def test_kernel_inverse_series_coefficients():
    k = geometric_kernel_series(2, ZZ)
    assert k[0] == LaurentPoly2.one(ZZ)
    assert k[1] == step_polynomial(ZZ)
    assert k[2].coeff(Axis.X, 0).coeff(Axis.Y, 0) == mono(4, 0, 0)


def test_mod_vs_exact_on_series_expression():
    # same expression tree over ZZ reduced mod p and over GF(p) agree
    kz = geometric_kernel_series(6, ZZ)
    kf = geometric_kernel_series(6, GF)
    expr_z = (kz * kz).mul_poly(step_polynomial(ZZ)) - kz
    expr_f = (kf * kf).mul_poly(step_polynomial(GF)) - kf
    for n in range(expr_z.order + 1):
        zz = expr_z[n]
        ff = expr_f[n]
        assert set(ff.terms) <= set(zz.terms)
        for ij, c in zz.terms.items():
            assert ff.terms.get(ij, 0) == c % 45007
