import random

import pytest
from hypothesis import given, settings, strategies as st

from cyclonorm.cyclotomic import CycloInt
from cyclonorm.group_ring import is_prime
from cyclonorm.semilocal import (
    SemilocalElement,
    balanced_digit,
    crt_from_factors,
    factor_phi,
    global_pth_root_embeddings,
    in_balanced_set,
    multiplicative_order,
    prime_power_split,
    project_to_factor,
    pth_roots_in_factor,
    root_of_unity_quotient,
    sl_embed,
    synthetic_root_of_unity,
    y_digits,
)


def test_factor_counts_examples():
    assert factor_phi(11, 5, 2).g == 4        # 11 = 1 mod 5: linear factors
    assert factor_phi(2, 5, 3).g == 1         # order of 2 mod 5 is 4: inert
    assert factor_phi(19, 5, 2).g == 2        # order 2: quadratic factors
    with pytest.raises(ValueError):
        factor_phi(5, 5, 2)
    with pytest.raises(ValueError):
        factor_phi(10, 5, 2)


def test_factor_counts_random_pairs():
    rng = random.Random(42)
    primes = [r for r in range(2, 200) if is_prime(r)]
    done = 0
    while done < 20:
        p = rng.choice([5, 7, 11, 13])
        r = rng.choice(primes)
        if r == p:
            continue
        fact = factor_phi(r, p, 2)
        d = multiplicative_order(r, p)
        assert fact.g == (p - 1) // d
        assert fact.residue_degree == d
        assert all(f[-1] == 1 for f in fact.factors)
        done += 1


@pytest.mark.parametrize("p,m", [(5, 11 ** 3), (7, 2 ** 8), (5, 12 ** 3)])
@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_embedding_is_homomorphic(p, m, data):
    coords = st.tuples(*([st.integers(-50, 50)] * (p - 1)))
    a = CycloInt(p, data.draw(coords))
    b = CycloInt(p, data.draw(coords))
    assert sl_embed(p, a + b, m) == sl_embed(p, a, m) + sl_embed(p, b, m)
    assert sl_embed(p, a * b, m) == sl_embed(p, a, m) * sl_embed(p, b, m)
    c = data.draw(st.integers(1, p - 1))
    assert sl_embed(p, a.galois(c), m) == sl_embed(p, a, m).galois(c)


def test_embedding_examples():
    assert sl_embed(5, 1, 11 ** 2).is_one()
    u = sl_embed(5, CycloInt.zeta_power(5, 1), 11 ** 2)
    assert u.galois(2) == sl_embed(5, CycloInt.zeta_power(5, 2), 11 ** 2)
    # unit inversion
    v = sl_embed(5, 7, 11 ** 2)
    assert (v * v.inverse()).is_one()
    with pytest.raises(ZeroDivisionError):
        sl_embed(5, 11, 11 ** 2).inverse()
    from fractions import Fraction
    w = sl_embed(5, Fraction(1, 7), 11 ** 2)
    assert (w * v).is_one()


def test_embedding_equivariance_bulk():
    # the diagonal embedding commutes with conjugation: 1000 random pairs
    rng = random.Random(17)
    p, m = 5, 11 ** 3
    for _ in range(1000):
        x = CycloInt(p, tuple(rng.randrange(-100, 101) for _ in range(p - 1)))
        c = rng.randrange(1, p)
        assert sl_embed(p, x.galois(c), m) == sl_embed(p, x, m).galois(c)


def test_galois_composition():
    rng = random.Random(0)
    for p, m in [(5, 11 ** 3), (7, 2 ** 8)]:
        for _ in range(30):
            u = SemilocalElement(p, m, tuple(rng.randrange(m) for _ in range(p - 1)))
            a, b = rng.randrange(1, p), rng.randrange(1, p)
            assert u.galois(a).galois(b) == u.galois(a * b % p)
            assert u.galois(1) == u


def test_y_digit_examples():
    p, y, n = 5, 66, 4
    m = y ** n
    t = CycloInt(p, (3, -5, 0, 7))
    assert in_balanced_set(t, y)
    d = y_digits(sl_embed(p, t, m), n, y)
    assert d.digits[0] == t and all(x.is_zero() for x in d.digits[1:])
    zeta_digit = y_digits(sl_embed(p, CycloInt.zeta_power(p, 1).scale(y), m), n, y)
    assert zeta_digit.digits[0].is_zero()
    assert zeta_digit.digits[1] == CycloInt.zeta_power(p, 1)


def test_y_digit_roundtrip_bijection():
    p, y, n = 5, 66, 4
    m = y ** n
    rng = random.Random(1)
    seen = set()
    for _ in range(60):
        u = SemilocalElement(p, m, tuple(rng.randrange(m) for _ in range(p - 1)))
        d = y_digits(u, n, y)
        assert all(in_balanced_set(t, y) for t in d.digits)
        assert d.assemble(m) == u
        seen.add(tuple(tuple(t.coords) for t in d.digits))
    assert len(seen) == 60
    with pytest.raises(ValueError):
        y_digits(SemilocalElement(p, m, (0,) * 4), n + 1, y)


def test_crt_consistency_composite_base():
    # computing mod y^N agrees with per-prime-power computation
    p, y, n = 5, 12, 3
    m = y ** n
    rng = random.Random(4)
    for _ in range(20):
        a = SemilocalElement(p, m, tuple(rng.randrange(m) for _ in range(p - 1)))
        b = SemilocalElement(p, m, tuple(rng.randrange(m) for _ in range(p - 1)))
        c = a * b + a.galois(2)
        for r, e in prime_power_split(y):
            mr = r ** (e * n)
            ar, br = a.reduce_to(mr), b.reduce_to(mr)
            cr = ar * br + ar.galois(2)
            assert cr == c.reduce_to(mr)


def test_factor_projection_crt_roundtrip():
    p, r, n = 5, 11, 3
    fact = factor_phi(r, p, n)
    m = r ** n
    rng = random.Random(5)
    for _ in range(15):
        u = SemilocalElement(p, m, tuple(rng.randrange(m) for _ in range(p - 1)))
        res = [project_to_factor(u, fact, j) for j in range(fact.g)]
        assert crt_from_factors(res, fact) == u
    # products respect the factorwise computation
    for _ in range(10):
        u = SemilocalElement(p, m, tuple(rng.randrange(m) for _ in range(p - 1)))
        v = SemilocalElement(p, m, tuple(rng.randrange(m) for _ in range(p - 1)))
        prod = u * v
        for j in range(fact.g):
            pu = project_to_factor(u, fact, j)
            pv = project_to_factor(v, fact, j)
            from cyclonorm.semilocal import _poly_mod, _poly_mul
            direct = _poly_mod(_poly_mul(pu, pv, m), list(fact.factors[j]), m)
            assert direct == project_to_factor(prod, fact, j)


def test_root_quotient_examples():
    p, y, n = 5, 11, 4
    m = y ** n
    v = sl_embed(p, 3, m)
    assert root_of_unity_quotient(v, v).is_one()
    z = sl_embed(p, CycloInt.zeta_power(p, 1), m)
    assert root_of_unity_quotient(z * v, v) == z
    with pytest.raises(ArithmeticError):
        root_of_unity_quotient(sl_embed(p, 2, m), sl_embed(p, 3, m))


@pytest.mark.parametrize("p,y", [(5, 11), (5, 22), (7, 13), (3, 7), (5, 106)])
def test_synthetic_roots_nontrivial(p, y):
    rho = synthetic_root_of_unity(p, y, 5)
    assert (rho ** p).is_one()
    assert all(rho != g for g in global_pth_root_embeddings(p, y ** 5))


def test_root_enumeration_count():
    # p = 3 splits at r = 7 into two linear factors: 3^2 local cube roots
    fact = factor_phi(7, 3, 2)
    assert fact.g == 2
    roots = [pth_roots_in_factor(fact, j) for j in range(2)]
    assert all(len(r) == 3 for r in roots)
    seen = set()
    for a in roots[0]:
        for b in roots[1]:
            u = crt_from_factors([a, b], fact)
            assert (u ** 3).is_one()
            seen.add(u.poly)
    assert len(seen) == 9
    # exactly 3 of the 9 are global embeddings
    globals_ = {g.poly for g in global_pth_root_embeddings(3, 7 ** 2)}
    assert len(globals_ & seen) == 3


def test_balanced_digit_bounds():
    for y in (5, 6, 11, 66):
        for n in range(-3 * y, 3 * y):
            d = balanced_digit(n, y)
            assert -y < 2 * d <= y
            assert (n - d) % y == 0
