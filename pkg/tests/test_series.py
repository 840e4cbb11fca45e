import math
from fractions import Fraction

import pytest

from cyclonorm.cyclotomic import CycloInt, inverse_uniformizer_numerator
from cyclonorm.group_ring import GroupRingElement
from cyclonorm.semilocal import synthetic_root_of_unity
from cyclonorm.series import (
    binom_coeffs,
    coeff_bound_check,
    denominator_exponent,
    digit_rows_check,
    double_table,
    equivariance_check,
    factorial_valuation,
    normalized_coeffs,
    pth_power_check,
    reassemble,
    reassembly_check,
    sl_eval,
    wieferich_sums,
)
from cyclonorm.stickelberger import (
    ConstructionFailed,
    StickelbergerContext,
    construct_weight2_annihilator,
    fueter,
)


def annihilator_element(p):
    ctx = StickelbergerContext(p)
    try:
        return construct_weight2_annihilator(ctx).element
    except ConstructionFailed:
        return construct_weight2_annihilator(ctx, require_unfixed=False).element


def test_denominator_exponent():
    assert factorial_valuation(12, 5) == 2
    assert denominator_exponent(12, 5) == 14
    assert denominator_exponent(0, 5) == 0
    assert [denominator_exponent(m, 5) for m in range(6)] == [0, 1, 2, 3, 4, 6]


@pytest.mark.parametrize("p", [5, 7])
def test_single_factor_against_direct_binomial(p):
    for c in range(1, p):
        t = GroupRingElement.from_inverse_coeffs(p, {c: 1})
        tab = binom_coeffs(t, 6, full=False)
        assert tab.integrality_ok()
        c_inv = pow(c, p - 2, p)
        for m in range(7):
            binom = Fraction(1)
            for i in range(m):
                binom *= Fraction(1, p) - i
            binom /= math.factorial(m)
            assert tab.coefficient(m) == CycloInt.zeta_power(p, m * c_inv % p).scale(binom)


@pytest.mark.parametrize("p", [5, 7])
def test_leading_coefficient_is_one(p):
    for theta in [fueter(StickelbergerContext(p), 1), annihilator_element(p)]:
        for full in (True, False):
            tab = binom_coeffs(theta, 3, full=full)
            assert tab.coefficient(0) == CycloInt.from_rational(p, 1)


@pytest.mark.parametrize("p", [5, 7])
def test_integrality_to_order_12(p):
    ctx = StickelbergerContext(p)
    thetas = [fueter(ctx, 1), fueter(ctx, 1).scale(2),
              fueter(ctx, 1) + fueter(ctx, 2), annihilator_element(p)]
    for theta in thetas:
        for full in (True, False):
            assert binom_coeffs(theta, 12, full=full).integrality_ok()


@pytest.mark.parametrize("p", [5, 7])
def test_reciprocal_route_equals_signed_convolution(p):
    theta = fueter(StickelbergerContext(p), 1).scale(2)
    tab = binom_coeffs(theta, 8, full=True)
    direct = normalized_coeffs(theta - theta.conjugate(), 8, p)
    for m in range(9):
        unit = math.factorial(m) // p ** factorial_valuation(m, p)
        assert tab.numerators[m].scale(unit) == direct[m]


@pytest.mark.parametrize("p", [5, 7])
def test_formal_power_identity(p):
    ctx = StickelbergerContext(p)
    for theta in [fueter(ctx, 1), fueter(ctx, 1).scale(2), annihilator_element(p)]:
        tab = binom_coeffs(theta, 8, full=True)
        res = pth_power_check(tab)
        assert res.ok, res
    # trivial order-zero case
    tab = binom_coeffs(fueter(ctx, 1), 0, full=True)
    assert pth_power_check(tab, 0).ok


def test_q_variant_integrality_and_power():
    ctx = StickelbergerContext(5)
    for theta in [fueter(ctx, 1), fueter(ctx, 1).scale(2)]:
        tab = binom_coeffs(theta, 10, full=True, den_prime=7)
        assert tab.q == 7
        assert tab.integrality_ok()
        assert pth_power_check(tab, 6).ok


@pytest.mark.parametrize("p", [5, 7])
def test_dominance_bounds(p):
    theta = fueter(StickelbergerContext(p), 1).scale(2)
    tab = binom_coeffs(theta, 8, full=True)
    for m in range(9):
        check = coeff_bound_check(tab, m)
        assert check.holds, (m, check)
    plain = binom_coeffs(theta, 8, full=False)
    for m in range(9):
        assert coeff_bound_check(plain, m).holds
    # bounds are monotone in the weight for nested exponent elements
    small = binom_coeffs(fueter(StickelbergerContext(p), 1), 6, full=True)
    for m in range(7):
        assert coeff_bound_check(small, m).bound <= coeff_bound_check(tab, m).bound


def test_sl_eval_stability_certificates():
    ctx = StickelbergerContext(5)
    tab = binom_coeffs(fueter(ctx, 1), 8, full=True)
    s = sl_eval(tab, 3, 11, 4)
    assert s.stable and s.cross_precision_ok
    # zero numerator count check: y = 0 is rejected upstream by gcd rules
    with pytest.raises(ValueError):
        sl_eval(tab, 11, 11, 3)
    with pytest.raises(ValueError):
        sl_eval(tab, 3, 25, 3)   # ramified base


@pytest.mark.parametrize("p,x,y", [(5, 3, 11), (7, 2, 13)])
def test_equivariance(p, x, y):
    tab = binom_coeffs(fueter(StickelbergerContext(p), 1), 8, full=True)
    assert equivariance_check(tab, x, y, 4)


def test_galois_table_matches_recomputation():
    p = 5
    theta = fueter(StickelbergerContext(p), 1)
    tab = binom_coeffs(theta, 6, full=True)
    for c in range(1, p):
        moved = tab.galois(c)
        rebuilt = binom_coeffs(GroupRingElement.sigma(p, c) * theta, 6, full=True)
        assert moved.numerators == rebuilt.numerators


@pytest.mark.parametrize("p", [5, 7, 11])
def test_wieferich_sums(p):
    ws = wieferich_sums(p)
    assert ws.half_congruence
    assert ws.skew_congruence
    assert ws.skew_nonzero
    assert ws.conjugate_sum_ok
    assert ws.flipped_for_lower_half


def test_wieferich_sum_value_p5():
    ws = wieferich_sums(5)
    num = inverse_uniformizer_numerator(5)
    # support {3, 4}: the inverse exponents are 2 and 4
    expected = (num.galois(2) + num.galois(4)).scale(2)
    assert ws.total == expected


def test_double_table_rows_and_reassembly():
    p = 5
    theta = fueter(StickelbergerContext(p), 1).scale(2)
    tab = binom_coeffs(theta, 8, full=True)
    for y, x in [(11, 3), (22, 3)]:
        rho = synthetic_root_of_unity(p, y, 8)
        dt = double_table(tab, rho, x, y, depth=5)
        assert digit_rows_check(dt, tab)
        assert reassembly_check(dt, tab, 5)
        # the first row digits are the digits of the root itself
        from cyclonorm.semilocal import y_digits
        rho_digits = y_digits(rho.reduce_to(y ** 6), 6, y)
        assert dt.entry(0, 0) == rho_digits.digits[0]
        # literal row definition without the absorbed power
        dt0 = double_table(tab, rho, x, y, depth=4, absorb_x=False)
        assert digit_rows_check(dt0, tab)
        m = y ** 5
        lhs = reassemble(dt0, 5)
        rhs = rho.reduce_to(m) * sl_eval(tab, x, y, 5).value
        assert lhs == rhs


def test_double_table_requires_precision():
    p = 5
    tab = binom_coeffs(fueter(StickelbergerContext(p), 1), 4, full=True)
    rho = synthetic_root_of_unity(p, 11, 3)
    with pytest.raises(ValueError):
        double_table(tab, rho, 3, 11, depth=5)
