"""Exact arithmetic in Z[zeta] and Q(zeta) for a primitive p-th root of unity.

Elements are coordinate vectors in the normal power basis {zeta, zeta^2, ...,
zeta^{p-1}}; the constant 1 is represented through sum_c zeta^c = -1.  All
ring arithmetic is exact (ints or Fractions); archimedean magnitudes are the
only place floating point appears and they carry a two-precision certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple, Union

import mpmath

from .group_ring import GroupRingElement, is_prime
from . import linalg

Scalar = Union[int, Fraction]


def _as_scalar(x) -> Scalar:
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


@dataclass(frozen=True)
class CycloInt:
    """Element of Q(zeta_p) with exact coordinates in the basis {zeta..zeta^{p-1}}."""

    p: int
    coords: Tuple[Scalar, ...]

    def __post_init__(self):
        if not is_prime(self.p) or self.p < 3:
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if len(self.coords) != self.p - 1:
            raise ValueError("coordinate vector must have length p-1")
        object.__setattr__(self, "coords", tuple(_as_scalar(c) for c in self.coords))

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, p: int) -> "CycloInt":
        return cls(p, (0,) * (p - 1))

    @classmethod
    def from_rational(cls, p: int, value: Scalar) -> "CycloInt":
        v = Fraction(value)
        return cls(p, (-v,) * (p - 1))

    @classmethod
    def zeta_power(cls, p: int, k: int) -> "CycloInt":
        k %= p
        if k == 0:
            return cls.from_rational(p, 1)
        coords = [0] * (p - 1)
        coords[k - 1] = 1
        return cls(p, tuple(coords))

    @classmethod
    def from_exp_map(cls, p: int, terms: Dict[int, Scalar]) -> "CycloInt":
        """From {exponent mod p: coefficient}; exponent 0 handled via the base."""
        coords = [Fraction(0)] * (p - 1)
        const = Fraction(0)
        for e, v in terms.items():
            e %= p
            if e == 0:
                const += Fraction(v)
            else:
                coords[e - 1] += Fraction(v)
        if const:
            coords = [c - const for c in coords]
        return cls(p, tuple(coords))

    @classmethod
    def from_polynomial(cls, p: int, poly: Sequence[Scalar]) -> "CycloInt":
        """From coefficients of 1, zeta, ..., zeta^{deg} (deg <= p-1)."""
        return cls.from_exp_map(p, {i: c for i, c in enumerate(poly)})

    # -- structure -----------------------------------------------------------

    def coord(self, c: int) -> Scalar:
        """Coefficient of zeta^c, c in 1..p-1."""
        return self.coords[c - 1]

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return len(set(self.coords)) == 1

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return -Fraction(self.coords[0])

    def is_integral(self) -> bool:
        return all(Fraction(c).denominator == 1 for c in self.coords)

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- ring operations -----------------------------------------------------

    def _check(self, other: "CycloInt") -> None:
        if self.p != other.p:
            raise ValueError(f"mismatched primes {self.p} != {other.p}")

    def __add__(self, other: "CycloInt") -> "CycloInt":
        self._check(other)
        return CycloInt(self.p, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "CycloInt") -> "CycloInt":
        self._check(other)
        return CycloInt(self.p, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "CycloInt":
        return CycloInt(self.p, tuple(-a for a in self.coords))

    def scale(self, v: Scalar) -> "CycloInt":
        return CycloInt(self.p, tuple(Fraction(v) * a for a in self.coords))

    def __mul__(self, other: "CycloInt") -> "CycloInt":
        self._check(other)
        p = self.p
        acc = [0] * p  # indexed by exponent mod p
        for i in range(1, p):
            a = self.coords[i - 1]
            if not a:
                continue
            for j in range(1, p):
                b = other.coords[j - 1]
                if b:
                    acc[(i + j) % p] += a * b
        const = acc[0]
        if const:
            return CycloInt(p, tuple(acc[c] - const for c in range(1, p)))
        return CycloInt(p, tuple(acc[1:]))

    def __pow__(self, n: int) -> "CycloInt":
        if n < 0:
            return self.inverse() ** (-n)
        result = CycloInt.from_rational(self.p, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "CycloInt":
        """Exact inverse in Q(zeta): product of the other conjugates over the norm."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        prod = CycloInt.from_rational(self.p, 1)
        for c in range(2, self.p):
            prod = prod * self.galois(c)
        nrm = self * prod
        return prod.scale(Fraction(1) / nrm.as_rational())

    def divide_exact(self, other: "CycloInt") -> "CycloInt":
        return self * other.inverse()

    # -- Galois action ---------------------------------------------------------

    def galois(self, c: int) -> "CycloInt":
        """sigma_c: zeta -> zeta^c."""
        c %= self.p
        if c == 0:
            raise ValueError("Galois index must be prime to p")
        coords = [0] * (self.p - 1)
        for j in range(1, self.p):
            coords[(c * j) % self.p - 1] = self.coords[j - 1]
        return CycloInt(self.p, tuple(coords))

    def conj(self) -> "CycloInt":
        return self.galois(self.p - 1)

    def group_ring_power(self, theta: GroupRingElement) -> "CycloInt":
        """x^theta = prod_c sigma_c^{-1}(x)^{n_c} for theta with n_c >= 0."""
        if theta.p != self.p:
            raise ValueError("mismatched primes")
        t = theta.lift() if theta.modulus is not None else theta
        if any(n < 0 for n in t.coeffs):
            raise ValueError("group-ring exponent must have nonnegative coefficients")
        result = CycloInt.from_rational(self.p, 1)
        for c in range(1, self.p):
            n = t.coeff(c)
            if n:
                result = result * (self.galois(pow(c, self.p - 2, self.p)) ** n)
        return result

    # -- trace, norm, pairing ---------------------------------------------------

    def trace(self) -> Scalar:
        return _as_scalar(-sum(Fraction(c) for c in self.coords))

    def norm(self) -> Scalar:
        """Field norm via the determinant of the multiplication matrix."""
        if all(Fraction(c).denominator == 1 for c in self.coords):
            rows = [kappa_int(self * CycloInt.zeta_power(self.p, j)) for j in range(1, self.p)]
            return linalg.bareiss_det(rows)
        den = math.lcm(*(Fraction(c).denominator for c in self.coords))
        scaled = self.scale(den)
        return _as_scalar(Fraction(scaled.norm(), den ** (self.p - 1)))

    def __repr__(self) -> str:
        terms = [f"{c}*z^{e}" for e, c in zip(range(1, self.p), self.coords) if c]
        return f"<{' + '.join(terms) if terms else '0'} (p={self.p})>"


# -- coordinate maps ------------------------------------------------------------


def kappa(x: CycloInt) -> Tuple[Fraction, ...]:
    """Coordinates of x with respect to {zeta..zeta^{p-1}} (identity on storage)."""
    return tuple(Fraction(c) for c in x.coords)


def kappa_int(x: CycloInt) -> List[int]:
    if not x.is_integral():
        raise ValueError("integral coordinates expected")
    return [int(c) for c in x.coords]


def kappa_inv(p: int, vec: Sequence[Scalar]) -> CycloInt:
    return CycloInt(p, tuple(vec))


def trace_coordinate_residues(x: CycloInt) -> Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...]]:
    """Trace-form coordinate extraction, two variants.

    Returns (exact, shifted) with
      exact[c-1]   = Tr((zeta^{-c} - 1) x)          ( = p * kappa(x)_c, always)
      shifted[c-1] = Tr((1 + zeta^{-c}) x)          ( = p * kappa(x)_c on trace-zero x)
    """
    p = x.p
    tr = Fraction(x.trace())
    exact = []
    shifted = []
    for c in range(1, p):
        t = Fraction((x * CycloInt.zeta_power(p, p - c)).trace())
        exact.append(t - tr)
        shifted.append(t + tr)
    return tuple(exact), tuple(shifted)


def trace_pairing(x: CycloInt, y: CycloInt) -> Scalar:
    """Hermitian pairing Tr(x * conj(y))."""
    return (x * y.conj()).trace()


def trace_product_coordinate_identity(x: CycloInt, y: CycloInt) -> bool:
    """Tr(x y) = p * sum_j x_j y_{p-j} - (sum x_i)(sum y_j), exactly."""
    p = x.p
    lhs = Fraction((x * y).trace())
    xs, ys = kappa(x), kappa(y)
    rhs = p * sum(xs[j - 1] * ys[p - j - 1] for j in range(1, p)) - sum(xs) * sum(ys)
    return lhs == rhs


@dataclass(frozen=True)
class NormChain:
    """Quantities from the norm-comparison chain on trace-zero elements.

    pairing = Tr(x conj(x)) = p * sum x_c^2; the chain (squared throughout)
    is  p^2 |kappa|_sup^2  <=  p * pairing  <=  p^2 (p-1) |kappa|_sup^2.
    """

    sup: Fraction
    pairing: Fraction
    left_ok: bool
    right_ok: bool

    @property
    def holds(self) -> bool:
        return self.left_ok and self.right_ok


def norms_compare(x: CycloInt) -> NormChain:
    if Fraction(x.trace()) != 0:
        raise ValueError("norm chain applies to trace-zero elements")
    p = x.p
    coords = kappa(x)
    sup = max((abs(c) for c in coords), default=Fraction(0))
    pairing = Fraction(trace_pairing(x, x))
    sq_sum = sum(c * c for c in coords)
    if pairing != p * sq_sum:
        raise AssertionError("pairing identity failed on trace-zero element")
    return NormChain(
        sup=sup,
        pairing=pairing,
        left_ok=sup * sup <= sq_sum,
        right_ok=sq_sum <= (p - 1) * sup * sup,
    )


# -- lambda-adic expansions -------------------------------------------------------


def uniformizer(p: int) -> CycloInt:
    return CycloInt.from_rational(p, 1) - CycloInt.zeta_power(p, 1)


def inverse_uniformizer_numerator(p: int) -> CycloInt:
    """p/(1-zeta) as an exact algebraic integer: -(zeta + 2 zeta^2 + ... )."""
    return CycloInt(p, tuple(-c for c in range(1, p)))


def divide_by_uniformizer(x: CycloInt) -> CycloInt:
    """Exact division by lambda = 1 - zeta; requires divisibility."""
    p = x.p
    scaled = x * inverse_uniformizer_numerator(p)
    out = []
    for c in scaled.coords:
        q = Fraction(c) / p
        out.append(q)
    res = CycloInt(p, tuple(out))
    if x.is_integral() and not res.is_integral():
        raise ValueError("element is not divisible by the uniformizer")
    return res


def residue_mod_uniformizer(x: CycloInt) -> int:
    """Image in Z[zeta]/(lambda) = F_p, i.e. evaluation at zeta = 1 mod p."""
    if not x.is_integral():
        raise ValueError("integral element expected")
    return int(sum(x.coords)) % x.p


def lambda_valuation(x: CycloInt, cap: int = 10_000) -> int:
    """v_lambda(x) for integral nonzero x."""
    if x.is_zero():
        raise ValueError("valuation of zero")
    v = 0
    while residue_mod_uniformizer(x) == 0:
        x = divide_by_uniformizer(x)
        v += 1
        if v > cap:
            raise RuntimeError("valuation cap exceeded")
    return v


@dataclass(frozen=True)
class LambdaExpansion:
    p: int
    digits: Tuple[int, ...]
    balanced: bool
    terminated: bool  # remainder hit zero within the requested digits

    def partial_sum(self) -> CycloInt:
        p = self.p
        acc = CycloInt.zero(p)
        power = CycloInt.from_rational(p, 1)
        lam = uniformizer(p)
        for d in self.digits:
            if d:
                acc = acc + power.scale(d)
            power = power * lam
        return acc


def lambda_expand(w: CycloInt, digits: int, balanced: bool = True) -> LambdaExpansion:
    """First `digits` lambda-adic digits of an integral element.

    Digits lie in {0..p-1} (plain) or in {-(p-1)/2..(p-1)/2} (balanced); the
    partial sum reproduces w modulo lambda^digits.
    """
    if not w.is_integral():
        raise ValueError("integral element expected")
    if digits < 1:
        raise ValueError("need at least one digit")
    p = w.p
    out = []
    cur = w
    for _ in range(digits):
        d = residue_mod_uniformizer(cur)
        if balanced and d > (p - 1) // 2:
            d -= p
        out.append(d)
        cur = cur - CycloInt.from_rational(p, d)
        cur = divide_by_uniformizer(cur)
    return LambdaExpansion(p, tuple(out), balanced, cur.is_zero())


def congruent_mod_uniformizer_power(a: CycloInt, b: CycloInt, k: int) -> bool:
    d = a - b
    if d.is_zero():
        return True
    return lambda_valuation(d) >= k


def congruent_mod_rational(a: CycloInt, b: CycloInt, m: int) -> bool:
    """a = b mod m Z[zeta], coordinatewise."""
    d = a - b
    if not d.is_integral():
        return False
    return all(int(c) % m == 0 for c in d.coords)


# -- archimedean magnitudes ---------------------------------------------------------


def embedding_abs(x: CycloInt, c: int = 1) -> Tuple[mpmath.mpf, mpmath.mpf]:
    """|sigma_c(x)| at zeta = e^{2 pi i/p}, with a certified error bound.

    Evaluates at two precisions and requires agreement; the returned pair is
    (value, error_bound) with relative error below 2^-40.
    """
    p = x.p
    size = max((abs(Fraction(v).numerator) + Fraction(v).denominator for v in x.coords),
               default=1)
    base_dps = 40 + len(str(size))
    vals = []
    for dps in (base_dps, 2 * base_dps):
        with mpmath.workdps(dps):
            z = mpmath.e ** (2j * mpmath.pi * c / p)
            acc = mpmath.mpc(0)
            for e in range(1, p):
                coef = Fraction(x.coord(e))
                if coef:
                    acc += mpmath.mpf(coef.numerator) / coef.denominator * z ** e
            vals.append(abs(acc))
    v1, v2 = vals
    err = abs(v1 - v2) + mpmath.mpf(2) ** (-120) * (abs(v2) + 1)
    if err > mpmath.mpf(2) ** (-40) * max(abs(v2), mpmath.mpf(1)):
        raise ArithmeticError("archimedean evaluation failed its precision certificate")
    return v2, err


def max_conjugate_abs(x: CycloInt) -> Tuple[mpmath.mpf, mpmath.mpf]:
    best = (mpmath.mpf(0), mpmath.mpf(0))
    for c in range(1, x.p):
        v, e = embedding_abs(x, c)
        if v > best[0]:
            best = (v, e)
    return best


# -- ideals in Hermite normal form -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class CycloIdeal:
    """Nonzero ideal of Z[zeta] as the HNF basis of its coordinate lattice."""

    p: int
    hnf: Tuple[Tuple[int, ...], ...]

    @classmethod
    def from_generators(cls, gens: Sequence[CycloInt]) -> "CycloIdeal":
        gens = [g for g in gens if not g.is_zero()]
        if not gens:
            raise ValueError("the zero ideal is not supported")
        p = gens[0].p
        rows = []
        for g in gens:
            if not g.is_integral():
                raise ValueError("ideal generators must be integral")
            for k in range(p - 1):
                rows.append(kappa_int(g * CycloInt.zeta_power(p, k)))
        bound = abs(int(gens[0].norm()))
        if bound == 0:
            raise ValueError("zero generator")
        hnf = linalg.hermite_normal_form(rows, p - 1, det_multiple=bound)
        if len(hnf) != p - 1:
            raise ValueError("generators do not span a full-rank ideal")
        ideal = cls(p, tuple(tuple(r) for r in hnf))
        ideal._verify_zeta_stable()
        return ideal

    @classmethod
    def principal(cls, g: CycloInt) -> "CycloIdeal":
        return cls.from_generators([g])

    def _verify_zeta_stable(self) -> None:
        for row in self.hnf:
            shifted = kappa_int(kappa_inv(self.p, row) * CycloInt.zeta_power(self.p, 1))
            if not linalg.hnf_contains(self.hnf, shifted):
                raise AssertionError("ideal lattice is not stable under zeta")

    def basis_elements(self) -> List[CycloInt]:
        return [kappa_inv(self.p, row) for row in self.hnf]

    def __mul__(self, other: "CycloIdeal") -> "CycloIdeal":
        if self.p != other.p:
            raise ValueError("mismatched primes")
        # products of the two stable lattice bases already span the product
        # lattice, so no further closure under zeta is needed; the norm
        # product times the standard lattice sits inside the product ideal
        rows = [kappa_int(a * b)
                for a in self.basis_elements() for b in other.basis_elements()]
        hnf = linalg.hermite_normal_form(rows, self.p - 1,
                                         det_multiple=self.norm() * other.norm())
        if len(hnf) != self.p - 1:
            raise ArithmeticError("ideal product lost rank")
        out = CycloIdeal(self.p, tuple(tuple(r) for r in hnf))
        out._verify_zeta_stable()
        return out

    def __pow__(self, n: int) -> "CycloIdeal":
        if n < 1:
            raise ValueError("positive ideal powers only")
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def norm(self) -> int:
        n = 1
        for i, row in enumerate(self.hnf):
            n *= row[i]
        return n

    def contains(self, x: CycloInt) -> bool:
        return linalg.hnf_contains(self.hnf, kappa_int(x))

    def __eq__(self, other) -> bool:
        return isinstance(other, CycloIdeal) and self.p == other.p and self.hnf == other.hnf

    def __hash__(self):
        return hash((self.p, self.hnf))

    def is_unit_ideal(self) -> bool:
        return self.norm() == 1


# -- the characteristic data of an equation instance ------------------------------------


@dataclass(frozen=True)
class CharacteristicData:
    p: int
    e: int
    x: int
    y: int
    z: int
    alpha: CycloInt
    ideal: CycloIdeal
    norm_is_zp: bool
    ideal_pth_power_is_alpha: bool
    ideal_norm_is_z: bool
    conjugates_coprime: bool
    size_bounds_apply: bool      # |y| > |x|, the regime of the size lemma
    size_bounds_hold: bool       # |y| > |z| > 2p (meaningful only when applicable)

    @property
    def all_identity_checks(self) -> bool:
        return self.norm_is_zp and self.ideal_pth_power_is_alpha \
            and self.ideal_norm_is_z and self.conjugates_coprime


def equation_value(p: int, x: int, y: int) -> int:
    """(x^p + y^p)/(x+y), an integer for x + y != 0."""
    if x + y == 0:
        raise ValueError("x + y must be nonzero")
    num = x ** p + y ** p
    assert num % (x + y) == 0
    return num // (x + y)


def characteristic_data(p: int, e: int, x: int, y: int, z: int) -> CharacteristicData:
    """The algebraic number alpha and ideal (alpha, z) attached to a solution."""
    if e not in (0, 1):
        raise ValueError("e must be 0 or 1")
    if x == 0 or y == 0 or z == 0:
        raise ValueError("x, y, z must be nonzero")
    if math.gcd(math.gcd(abs(x), abs(y)), abs(z)) != 1:
        raise ValueError("x, y, z must be coprime")
    if math.gcd(abs(x), abs(y)) != 1:
        raise ValueError("x and y must be coprime")
    if equation_value(p, x, y) != p ** e * z ** p:
        raise ValueError("inputs do not satisfy the norm equation")
    if e == 1 and (x + y) % p != 0:
        raise ValueError("the ramified case requires p | x + y")

    zeta = CycloInt.zeta_power(p, 1)
    alpha = CycloInt.from_rational(p, x) + zeta.scale(y)
    if e == 1:
        alpha = divide_by_uniformizer(alpha)
    norm_is_zp = alpha.norm() == z ** p

    ideal = CycloIdeal.from_generators([alpha, CycloInt.from_rational(p, z)])
    pth_power = ideal ** p
    ideal_pth_power_is_alpha = pth_power == CycloIdeal.principal(alpha)
    ideal_norm_is_z = ideal.norm() == abs(z)

    coprime = True
    for c in range(1, p):
        for d in range(c + 1, p):
            both = CycloIdeal.from_generators([alpha.galois(c), alpha.galois(d)])
            if not both.is_unit_ideal():
                coprime = False

    applies = abs(y) > abs(x)
    holds = abs(y) > abs(z) > 2 * p if applies else True
    return CharacteristicData(
        p, e, x, y, z, alpha, ideal,
        norm_is_zp, ideal_pth_power_is_alpha, ideal_norm_is_z, coprime,
        applies, holds,
    )
