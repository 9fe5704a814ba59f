import pytest

from semiperm.rings import QQ, ZZ, ModPrime
from semiperm.series import Axis, Domain, LaurentPoly2, TSeries
from semiperm.models import ModelSpec, enumerate_series, model_catalog
from semiperm.kernel import (
    diag_sections,
    f2_s3,
    f4_explicit_s2,
    f_compartments_s2,
    interpretation_for,
    kernel_inverse_series,
    kernel_root_poly_residual,
    kernel_root_residual,
    kernel_root_x,
    orbit_sum_series,
    quarter_plane_q,
    star_residual,
    substitute_x,
    verify_functional_equation,
    x0_f2l_identity,
)

CATALOG = model_catalog()
GF = ModPrime(45007)


def quadrant_section(f):
    return f.section(Axis.X, Domain.NONNEG).section(Axis.Y, Domain.NONNEG)


# ---------------------------------------------------------- quarter plane


def test_kernel_inverse_low_orders():
    k = kernel_inverse_series(2, ZZ)
    assert k[0] == LaurentPoly2.one(ZZ)
    assert len(k[1].terms) == 4
    assert k[2].coeff(Axis.X, 0).coeff(Axis.Y, 0) == LaurentPoly2.monomial(ZZ, 4, 0, 0)


def test_quarter_plane_q_against_enumerator():
    q = quarter_plane_q(14, ZZ)
    assert q[0] == LaurentPoly2.one(ZZ)
    assert q.eval_ones()[:3] == [1, 2, 6]
    assert q == enumerate_series(CATALOG["QP"], 14, ZZ)


# ------------------------------------------------------- four compartments


def test_compartments_match_sections():
    n = 12
    f = enumerate_series(CATALOG["S2"], n, ZZ)
    f1, f2, f3, f4 = f_compartments_s2(n, ZZ)
    assert f1 == f.section(Axis.X, Domain.NEG).section(Axis.Y, Domain.NEG)
    assert f2 == f.section(Axis.X, Domain.NEG).section(Axis.Y, Domain.NONNEG)
    assert f3 == f.section(Axis.X, Domain.NONNEG).section(Axis.Y, Domain.NEG)
    assert f4 == quadrant_section(f)
    total = f1 + f2 + f3 + f4
    assert total == f


def test_compartments_low_order_values():
    f1, f2, f3, f4 = f_compartments_s2(6, ZZ)
    assert f1[0] == LaurentPoly2.monomial(ZZ, 1, -1, -1)
    assert f2[0].is_zero() and f3[0].is_zero() and f4[0].is_zero()
    total = f1 + f2 + f3 + f4
    assert total.eval_ones()[:4] == [1, 4, 14, 48]


def test_f4_first_nonzero_order_matches_oracle():
    # the enumerator says the closed quadrant is first reached in 2 steps
    f = enumerate_series(CATALOG["S2"], 6, ZZ)
    assert quadrant_section(f).first_nonzero() == (
        2,
        LaurentPoly2.monomial(ZZ, 2, 0, 0),
    )
    _, _, _, f4 = f_compartments_s2(6, ZZ)
    assert f4.first_nonzero() == (2, LaurentPoly2.monomial(ZZ, 2, 0, 0))


def test_f4_explicit_form_agrees():
    assert f4_explicit_s2(10, ZZ) == f_compartments_s2(10, ZZ)[3]


def test_compartments_over_prime_field():
    n = 8
    f = enumerate_series(CATALOG["S2"], n, GF)
    parts = f_compartments_s2(n, GF)
    assert parts[0] + parts[1] + parts[2] + parts[3] == f


# ------------------------------------------------------------- s3 formula


def test_f2_s3_against_enumerator():
    n = 12
    s3 = enumerate_series(CATALOG["S3"], n, ZZ)
    f1 = s3 - quadrant_section(s3)
    assert f2_s3(n, f1, ZZ) == quadrant_section(s3)


def test_f2_s3_region_duality_input():
    # feeding the region-constrained series gives the identical result
    n = 12
    s3 = enumerate_series(CATALOG["S3"], n, ZZ)
    f1_sections = s3 - quadrant_section(s3)
    f1_region = enumerate_series(CATALOG["TQP"], n, ZZ)
    assert f1_sections == f1_region
    assert f2_s3(n, f1_sections, ZZ) == f2_s3(n, f1_region, ZZ)


def test_f2_s3_reading_adjudication():
    # only the substitute-then-section reading reproduces the enumerator
    n = 8
    s3 = enumerate_series(CATALOG["S3"], n, ZZ)
    f1 = s3 - quadrant_section(s3)
    ref = quadrant_section(s3)
    assert f2_s3(n, f1, ZZ, reading="substitute-then-section") == ref
    assert f2_s3(n, f1, ZZ, reading="section-then-substitute") != ref
    with pytest.raises(ValueError):
        f2_s3(n, f1, ZZ, reading="sideways")


def test_f2_s3_truncation_mismatch_rejected():
    f1 = enumerate_series(CATALOG["TQP"], 5, ZZ)
    with pytest.raises(ValueError):
        f2_s3(9, f1, ZZ)


def test_f2_s3_zero_at_t0():
    f1 = enumerate_series(CATALOG["TQP"], 5, ZZ)
    assert f2_s3(5, f1, ZZ)[0].is_zero()


# -------------------------------------------------------- diagonal split


def test_diag_sections_monomials():
    f = TSeries.from_poly(LaurentPoly2.monomial(ZZ, 1, 2, 2), 0)
    d, lo, up = diag_sections(f)
    assert d == f and lo.is_zero() and up.is_zero()
    g = TSeries.from_poly(LaurentPoly2.monomial(ZZ, 1, 3, 1), 0)
    d, lo, up = diag_sections(g)
    assert lo == g and d.is_zero() and up.is_zero()


def test_diag_sections_partition_s4a():
    n = 12
    f = enumerate_series(CATALOG["S4a"], n, ZZ)
    f2 = f - f.section(Axis.X, Domain.NEG).section(Axis.Y, Domain.NEG)
    d, lo, up = diag_sections(f2)
    assert d + lo + up == f2
    assert up == lo.swap_xy()


# ----------------------------------------------------------- kernel root


def test_kernel_root_low_orders():
    x = kernel_root_x(6, QQ)
    assert x[0].is_zero()
    assert x[1] == LaurentPoly2.one(QQ)
    assert x[2] == LaurentPoly2(QQ, {(0, 1): QQ.one(), (0, -1): QQ.one()})


def test_kernel_root_residuals():
    x = kernel_root_x(9, QQ)
    assert kernel_root_poly_residual(x, QQ).is_zero()
    assert kernel_root_residual(x, QQ).is_zero()
    bad = x + TSeries.from_poly(LaurentPoly2.one(QQ), 7).shift_t(2)
    assert not kernel_root_poly_residual(bad, QQ).is_zero()


def test_substitute_x_consistency():
    # substituting the root into x*y equals X*y
    x = kernel_root_x(6, QQ)
    f = TSeries.from_poly(LaurentPoly2.monomial(QQ, 1, 1, 1), 6)
    assert substitute_x(f, x) == x.mul_poly(LaurentPoly2.monomial(QQ, 1, 0, 1))
    with pytest.raises(ValueError):
        substitute_x(TSeries.from_poly(LaurentPoly2.monomial(QQ, 1, -1, 0), 6), x)


# ------------------------------------------------------ star / x0 checks


def test_star_residual_vanishes():
    assert star_residual(10, QQ).is_zero()


def test_star_residual_mod_odd_prime():
    assert star_residual(8, GF).is_zero()


def test_star_residual_requires_half():
    with pytest.raises(ValueError):
        star_residual(4, ZZ)
    with pytest.raises(ValueError):
        star_residual(4, ModPrime(2))


def test_star_residual_power_checks():
    assert not star_residual(8, QQ, start=(-1, 1)).is_zero()
    assert not star_residual(8, QQ, drop_diagonal=True).is_zero()


def test_x0_identity_vanishes():
    assert x0_f2l_identity(8, QQ).is_zero()
    res = x0_f2l_identity(4, QQ)
    assert res[0].is_zero()


def test_x0_identity_perturbed_root_fails():
    assert not x0_f2l_identity(8, QQ, perturb_root=True).is_zero()


# ------------------------------------------------- functional equation op


def test_verify_functional_equation_matches():
    for name in ("S2", "S3", "S4a", "S4b", "S5", "QP"):
        m = CATALOG[name]
        res = verify_functional_equation(m, interpretation_for(m), 12, ZZ)
        assert res.is_zero(through=11), name


def test_verify_functional_equation_mismatch_detected():
    m = CATALOG["S2"]
    s5_interp = interpretation_for(CATALOG["S5"])
    res = verify_functional_equation(m, s5_interp, 12, ZZ)
    assert not res.is_zero(through=11)


def test_interp_examples():
    assert interpretation_for(CATALOG["S2"]) == (Domain.ALL, Domain.ALL)
    assert interpretation_for(CATALOG["S5"]) == (Domain.POS, Domain.POS)
    assert interpretation_for(CATALOG["QP"]) == (Domain.ALL, Domain.ALL)


# ------------------------------------------------------- orbit-sum series


def test_orbit_sum_identity_s2():
    from semiperm.series import step_polynomial

    n = 10
    f = enumerate_series(CATALOG["S2"], n, ZZ)
    kf = f - f.mul_poly(step_polynomial(ZZ)).shift_t(1).truncate(n)  # (1-St)F
    assert orbit_sum_series(kf).is_zero()


def test_orbit_sum_identity_quarter_plane():
    from semiperm.series import orbit_sum, step_polynomial

    n = 10
    f = enumerate_series(CATALOG["QP"], n, ZZ)
    kf = f - f.mul_poly(step_polynomial(ZZ)).shift_t(1).truncate(n)
    expect = TSeries.from_poly(orbit_sum(LaurentPoly2.one(ZZ)), n)
    assert orbit_sum_series(kf) == expect


def test_orbit_sum_identity_general_start():
    from semiperm.series import orbit_sum, step_polynomial

    n = 8
    m = ModelSpec((-2, -2), Domain.ALL, Domain.ALL)
    f = enumerate_series(m, n, ZZ)
    kf = f - f.mul_poly(step_polynomial(ZZ)).shift_t(1).truncate(n)
    expect = TSeries.from_poly(orbit_sum(LaurentPoly2.monomial(ZZ, 1, -2, -2)), n)
    assert orbit_sum_series(kf) == expect
