"""Formal binomial series attached to group-ring exponents.

For theta = sum n_c sigma_c^{-1} and a denominator prime q (q = p in the main
case), the series (1 + zeta T)^{theta/q} has coefficients a_m with
q^{E(m)} a_m integral, E(m) = m + v_q(m!).  Everything is computed through
the factorial-normalized integral coefficients b_m = q^m m! a_m, which obey
the convolution rule b_m(t1 + t2) = sum_k C(m,k) b_k(t1) b_{m-k}(t2); the
full series divides out the conjugate factor exactly.

Also here: semilocal evaluation with stability certificates, the double
digit table feeding the perturbation algorithm, and the ramified-case
congruence sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath

from .cyclotomic import (
    CycloInt,
    congruent_mod_rational,
    inverse_uniformizer_numerator,
    max_conjugate_abs,
)
from .group_ring import GroupRingElement, weights
from .semilocal import (
    SemilocalElement,
    YDigits,
    in_balanced_set,
    sl_embed,
    y_digits,
)


def factorial_valuation(m: int, q: int) -> int:
    """v_q(m!)."""
    v = 0
    qk = q
    while qk <= m:
        v += m // qk
        qk *= q
    return v


def denominator_exponent(m: int, q: int) -> int:
    """E(m) = m + v_q(m!)."""
    return m + factorial_valuation(m, q)


# -- normalized coefficient arithmetic -------------------------------------------------


def _base_normalized(p: int, q: int, n: int, c: int, m_max: int) -> List[CycloInt]:
    """b_m for the single factor (1 + zeta^{1/c} T)^{n/q}, m <= m_max.

    b_m = [prod_{i<m} (n - i q)] * zeta^{m/c}; always integral.
    """
    c_inv = pow(c, p - 2, p)
    out = [CycloInt.from_rational(p, 1)]
    scalar = 1
    for m in range(1, m_max + 1):
        scalar *= n - (m - 1) * q
        out.append(CycloInt.zeta_power(p, m * c_inv % p).scale(scalar))
    return out


def _convolve(a: Sequence[CycloInt], b: Sequence[CycloInt], m_max: int) -> List[CycloInt]:
    p = a[0].p
    out = []
    for m in range(m_max + 1):
        acc = CycloInt.zero(p)
        for k in range(m + 1):
            if k < len(a) and m - k < len(b):
                term = a[k] * b[m - k]
                acc = acc + term.scale(math.comb(m, k))
        out.append(acc)
    return out


def _invert(b: Sequence[CycloInt], m_max: int) -> List[CycloInt]:
    """Normalized coefficients of the reciprocal series (leading term 1)."""
    p = b[0].p
    if b[0] != CycloInt.from_rational(p, 1):
        raise ValueError("reciprocal needs leading coefficient 1")
    out = [CycloInt.from_rational(p, 1)]
    for m in range(1, m_max + 1):
        acc = CycloInt.zero(p)
        for k in range(1, m + 1):
            if k < len(b):
                acc = acc + (b[k] * out[m - k]).scale(math.comb(m, k))
        out.append(-acc)
    return out


def normalized_coeffs(theta: GroupRingElement, m_max: int, q: int) -> List[CycloInt]:
    """b_m for (1 + zeta T)^{theta/q}, any integer coefficients on theta."""
    p = theta.p
    out = [CycloInt.from_rational(p, 1)] + [CycloInt.zero(p)] * m_max
    for c in range(1, p):
        n = theta.coeff(c)
        if n:
            out = _convolve(out, _base_normalized(p, q, n, c, m_max), m_max)
    return out


def _exact_divide_scalar(x: CycloInt, d: int) -> CycloInt:
    out = []
    for c in x.coords:
        if int(c) % d != 0:
            raise ArithmeticError("integrality of normalized coefficients failed")
        out.append(int(c) // d)
    return CycloInt(x.p, tuple(out))


@dataclass(frozen=True)
class SeriesTable:
    """Exact coefficient data for a binomial series.

    a_m = numerators[m] / q^{E(m)}; `full` means the conjugate factor has
    been divided out (exponent (1 - conj) theta / q), otherwise the exponent
    is theta/q alone.
    """

    p: int
    theta: GroupRingElement
    order: int
    q: int
    full: bool
    numerators: Tuple[CycloInt, ...]

    def coefficient(self, m: int) -> CycloInt:
        """a_m as an exact element with Fraction coordinates."""
        den = Fraction(1, self.q ** denominator_exponent(m, self.q))
        return self.numerators[m].scale(den)

    def integrality_ok(self) -> bool:
        return all(n.is_integral() for n in self.numerators)

    def galois(self, c: int) -> "SeriesTable":
        """Coefficientwise Galois action; equals the table of sigma_c theta."""
        moved = GroupRingElement.sigma(self.p, c) * self.theta
        return SeriesTable(
            self.p, moved, self.order, self.q, self.full,
            tuple(n.galois(c) for n in self.numerators),
        )


def binom_coeffs(theta: GroupRingElement, order: int, full: bool = True,
                 den_prime: Optional[int] = None) -> SeriesTable:
    """Series table for theta up to T^order.

    full: coefficients of (1+zeta T)^{theta/q} * [(1+conj(zeta) T)^{theta/q}]^{-1},
    built by exact reciprocal-and-multiply; plain: (1+zeta T)^{theta/q}.
    The stored numerators are q^{E(m)} a_m, certified integral.
    """
    p = theta.p
    q = den_prime if den_prime is not None else p
    b_theta = normalized_coeffs(theta, order, q)
    if full:
        b_conj = normalized_coeffs(theta.conjugate(), order, q)
        b = _convolve(b_theta, _invert(b_conj, order), order)
    else:
        b = b_theta
    nums = []
    for m, bm in enumerate(b):
        unit_part = math.factorial(m) // q ** factorial_valuation(m, q)
        nums.append(_exact_divide_scalar(bm, unit_part))
    return SeriesTable(p, theta, order, q, full, tuple(nums))


# -- exact truncated power series over Q(zeta) ---------------------------------------


def _ps_mul(a: List[CycloInt], b: List[CycloInt], order: int) -> List[CycloInt]:
    p = a[0].p
    out = []
    for m in range(order + 1):
        acc = CycloInt.zero(p)
        for k in range(m + 1):
            if k < len(a) and m - k < len(b):
                acc = acc + a[k] * b[m - k]
        out.append(acc)
    return out


def _ps_pow(a: List[CycloInt], e: int, order: int) -> List[CycloInt]:
    p = a[0].p
    result = [CycloInt.from_rational(p, 1)] + [CycloInt.zero(p)] * order
    base = list(a)
    while e:
        if e & 1:
            result = _ps_mul(result, base, order)
        base = _ps_mul(base, base, order)
        e >>= 1
    return result


def _ps_inv(a: List[CycloInt], order: int) -> List[CycloInt]:
    p = a[0].p
    one = CycloInt.from_rational(p, 1)
    if a[0] != one:
        raise ValueError("series reciprocal needs constant term 1")
    out = [one]
    for m in range(1, order + 1):
        acc = CycloInt.zero(p)
        for k in range(1, m + 1):
            if k < len(a):
                acc = acc + a[k] * out[m - k]
        out.append(-acc)
    return out


def _linear_factor_power(p: int, exponent_element: GroupRingElement, conj: bool,
                         order: int) -> List[CycloInt]:
    """prod_c (1 + zeta^{+-1/c} T)^{n_c} as an exact truncated series."""
    series = [CycloInt.from_rational(p, 1)] + [CycloInt.zero(p)] * order
    for c in range(1, p):
        n = exponent_element.coeff(c)
        if n == 0:
            continue
        e = pow(c, p - 2, p)
        if conj:
            e = (p - 1) * e % p
        factor = [CycloInt.from_rational(p, 1), CycloInt.zeta_power(p, e)]
        factor += [CycloInt.zero(p)] * (order - 1)
        if n > 0:
            series = _ps_mul(series, _ps_pow(factor, n, order), order)
        else:
            series = _ps_mul(series, _ps_inv(_ps_pow(factor, -n, order), order), order)
    return series


@dataclass(frozen=True)
class PowerCheckResult:
    ok: bool
    first_mismatch: Optional[int]


def pth_power_check(table: SeriesTable, order: Optional[int] = None) -> PowerCheckResult:
    """Formal identity: the full series to the q-th power equals the
    finite product (1+zeta T)^{theta} / (1+conj(zeta) T)^{theta}, to T^order.
    """
    if not table.full:
        raise ValueError("the power identity applies to the full series")
    order = table.order if order is None else order
    p = table.p
    partial = [table.coefficient(m) for m in range(order + 1)]
    lhs = _ps_pow(partial, table.q, order)
    rhs = _ps_mul(
        _linear_factor_power(p, table.theta, False, order),
        _ps_inv(_linear_factor_power(p, table.theta, True, order), order),
        order,
    )
    for m in range(order + 1):
        if lhs[m] != rhs[m]:
            return PowerCheckResult(False, m)
    return PowerCheckResult(True, None)


# -- archimedean dominance bounds ------------------------------------------------------


def binomial_abs_bound(weight: int, q: int, m: int, doubled: bool) -> Fraction:
    """|binom(-2w/q, m)| (doubled) or |binom(-w/q, m)| as an exact rational."""
    top = Fraction(-(2 if doubled else 1) * weight, q)
    val = Fraction(1)
    for i in range(m):
        val *= top - i
    val /= math.factorial(m)
    return abs(val)


@dataclass(frozen=True)
class BoundCheck:
    m: int
    value: float
    bound: Fraction
    holds: bool


def coeff_bound_check(table: SeriesTable, m: int) -> BoundCheck:
    """Dominance bound on |a_m| across all conjugates, with certified floats.

    The margin policy: the certified upper estimate of the magnitude must not
    exceed bound * (1 + 2^-20).
    """
    w = weights(table.theta).absolute
    bound = binomial_abs_bound(w, table.q, m, doubled=table.full)
    val, err = max_conjugate_abs(table.numerators[m])
    q_e = table.q ** denominator_exponent(m, table.q)
    with mpmath.workdps(60):
        upper = (val + err) / q_e
        bound_m = mpmath.mpf(bound.numerator) / bound.denominator
        holds = bool(upper <= bound_m * (1 + mpmath.mpf(2) ** -20))
        plain = float(val / q_e)
    return BoundCheck(m, plain, bound, holds)


# -- semilocal evaluation ---------------------------------------------------------------


@dataclass(frozen=True)
class SemilocalSum:
    value: SemilocalElement
    terms_used: int
    stable: bool                 # adding one more term does not change the value
    cross_precision_ok: bool     # evaluation at higher precision reduces to this one


def sl_eval(table: SeriesTable, x: int, y: int, precision: int) -> SemilocalSum:
    """Sum of the series at T = y/x in Z_y[zeta] mod y^precision.

    Terms of index >= precision vanish at the working modulus, so the partial
    sum with `precision` terms is the limit; the certificate re-evaluates with
    one extra term and at a higher modulus.
    """
    if math.gcd(x, y) != 1:
        raise ValueError("x must be invertible modulo y")
    if math.gcd(y, table.p) != 1:
        raise ValueError("the ramified prime is handled by uniformizer expansions")
    if table.order < precision:
        raise ValueError("series table too short for the requested precision")

    def partial(n_terms: int, prec: int) -> SemilocalElement:
        m = y ** prec
        inv_x = pow(x % m, -1, m)
        inv_q = pow(table.q % m, -1, m)
        acc = SemilocalElement(table.p, m, (0,) * (table.p - 1))
        for n in range(min(n_terms, table.order + 1)):
            e = denominator_exponent(n, table.q)
            scalar = pow(inv_q, e, m) * pow(inv_x, n, m) * pow(y, n, m) % m
            acc = acc + sl_embed(table.p, table.numerators[n], m).scale(scalar)
        return acc

    value = partial(precision, precision)
    stable = partial(precision + 1, precision) == value
    higher = partial(precision + 2, precision + 2)
    cross = higher.reduce_to(y ** precision) == value
    return SemilocalSum(value, min(precision, table.order + 1), stable, cross)


def equivariance_check(table: SeriesTable, x: int, y: int, precision: int,
                       conjugates: Optional[Sequence[int]] = None) -> bool:
    """sigma_c of the summed series equals the summed series of sigma_c theta."""
    base = sl_eval(table, x, y, precision).value
    for c in (conjugates if conjugates is not None else range(1, table.p)):
        via_sum = base.galois(c)
        via_table = sl_eval(table.galois(c), x, y, precision).value
        if via_sum != via_table:
            return False
        recomputed = binom_coeffs(GroupRingElement.sigma(table.p, c) * table.theta,
                                  table.order, table.full, table.q)
        if recomputed.numerators != table.galois(c).numerators:
            return False
    return True


# -- the double digit table --------------------------------------------------------------


@dataclass
class DoubleTable:
    """Balanced digits b_{n,h} of the twisted series rows.

    Row n is rho * a'_n * x^{-n} (the x power is absorbed into the row so the
    series becomes sum_n row_n y^n / q^{E(n)}; absorb_x=False leaves the
    plain rho * a'_n rows of the digit definition).  Entry (n, h) is the h-th
    balanced digit of row n; the pair contributes at order y^{n+h}.
    """

    p: int
    q: int
    x: int
    y: int
    depth: int
    absorb_x: bool
    rho: SemilocalElement
    entries: Dict[Tuple[int, int], CycloInt]

    def entry(self, n: int, h: int) -> CycloInt:
        return self.entries[(n, h)]

    def pairs(self) -> List[Tuple[int, int]]:
        return sorted(self.entries.keys(), key=lambda nh: (nh[0] + nh[1], nh[1]))


def double_table(table: SeriesTable, rho: SemilocalElement, x: int, y: int,
                 depth: int, absorb_x: bool = True) -> DoubleTable:
    """Digit table b_{n,h} for all pairs with n + h <= depth."""
    modulus = y ** (depth + 1)
    if rho.modulus % modulus != 0:
        raise ValueError("root of unity carries insufficient precision")
    if table.order < depth:
        raise ValueError("series table too short for the requested depth")
    rho_m = rho.reduce_to(modulus) if rho.modulus != modulus else rho
    inv_x = pow(x % modulus, -1, modulus)
    entries: Dict[Tuple[int, int], CycloInt] = {}
    for n in range(depth + 1):
        row = rho_m * sl_embed(table.p, table.numerators[n], modulus)
        if absorb_x:
            row = row.scale(pow(inv_x, n, modulus))
        digits = y_digits(row, depth + 1 - n, y)
        for h, digit in enumerate(digits.digits):
            entries[(n, h)] = digit
    return DoubleTable(table.p, table.q, x, y, depth, absorb_x, rho, entries)


def reassemble(dtable: DoubleTable, numerators_precision: int) -> SemilocalElement:
    """sum over pairs of b_{n,h} y^{n+h} / (q^{E(n)} x^{n or 0}) mod y^K."""
    k = numerators_precision
    m = dtable.y ** k
    inv_q = pow(dtable.q % m, -1, m)
    inv_x = pow(dtable.x % m, -1, m)
    acc = SemilocalElement(dtable.p, m, (0,) * (dtable.p - 1))
    for (n, h), digit in dtable.entries.items():
        if n + h >= k:
            continue
        scalar = pow(dtable.y, n + h, m) * pow(inv_q, denominator_exponent(n, dtable.q), m) % m
        if not dtable.absorb_x:
            scalar = scalar * pow(inv_x, n, m) % m
        acc = acc + sl_embed(dtable.p, digit, m).scale(scalar)
    return acc


def reassembly_check(dtable: DoubleTable, table: SeriesTable, cutoff: int) -> bool:
    """The double sum reproduces rho * (series sum) mod y^cutoff."""
    target = sl_eval(table, dtable.x, dtable.y, cutoff).value
    rho_k = dtable.rho.reduce_to(dtable.y ** cutoff)
    lhs = reassemble(dtable, cutoff)
    return lhs == rho_k * target


def digit_rows_check(dtable: DoubleTable, table: SeriesTable) -> bool:
    """Row definition: digits of row n reassemble rho * a'_n (* x^{-n})."""
    m = dtable.y ** (dtable.depth + 1)
    rho_m = dtable.rho.reduce_to(m)
    inv_x = pow(dtable.x % m, -1, m)
    for n in range(dtable.depth + 1):
        row = rho_m * sl_embed(dtable.p, table.numerators[n], m)
        if dtable.absorb_x:
            row = row.scale(pow(inv_x, n, m))
        digits = [dtable.entries[(n, h)] for h in range(dtable.depth + 1 - n)]
        partial = YDigits(dtable.p, dtable.y, tuple(digits)).assemble(m)
        k = dtable.depth + 1 - n
        diff = row - partial
        if any(c % dtable.y ** k for c in diff.poly):
            return False
        if not all(in_balanced_set(d, dtable.y) for d in digits):
            return False
    return True


# -- congruence sums for the ramified case ---------------------------------------------


@dataclass(frozen=True)
class RamifiedSums:
    p: int
    total: CycloInt                  # S = 2 sum_{c > p/2} p/(1 - zeta^{1/c})
    half_congruence: bool            # S/2 = p/(8(1-zeta)) mod p
    skew_congruence: bool            # 2S - p(p-1) = p/(2(1-zeta)) mod p
    skew_nonzero: bool               # ... and that value is nonzero mod p
    conjugate_sum_ok: bool           # S + conj(S) = p(p-1)
    flipped_for_lower_half: bool     # complementary sum satisfies both with - signs


def wieferich_sums(p: int) -> RamifiedSums:
    """Exact congruences behind the p^2 | (x+y) criterion in the ramified case.

    The sum is oriented along the support {c > p/2} of the first Fueter
    element; the complementary orientation flips the sign of both
    congruences, which is also verified.
    """
    inv_num = inverse_uniformizer_numerator(p)   # p/(1 - zeta), integral

    def oriented(support) -> CycloInt:
        acc = CycloInt.zero(p)
        for c in support:
            acc = acc + inv_num.galois(pow(c, p - 2, p))
        return acc.scale(2)

    s_up = oriented(range((p + 1) // 2, p))
    s_lo = oriented(range(1, (p + 1) // 2))
    inv2 = pow(2, p - 2, p)
    inv8 = pow(8, p - 2, p)

    half = congruent_mod_rational(s_up.scale(Fraction(1, 2)), inv_num.scale(inv8), p)
    skew_val = s_up.scale(2) - CycloInt.from_rational(p, p * (p - 1))
    skew = congruent_mod_rational(skew_val, inv_num.scale(inv2), p)
    nonzero = not congruent_mod_rational(skew_val, CycloInt.zero(p), p)
    conj_ok = (s_up + s_up.conj()) == CycloInt.from_rational(p, p * (p - 1))

    flip1 = congruent_mod_rational(s_lo.scale(Fraction(1, 2)), -inv_num.scale(inv8), p)
    skew_lo = s_lo.scale(2) - CycloInt.from_rational(p, p * (p - 1))
    flip2 = congruent_mod_rational(skew_lo, -inv_num.scale(inv2), p)

    return RamifiedSums(p, s_up, half, skew, nonzero, conj_ok, flip1 and flip2)
