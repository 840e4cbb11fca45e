import pytest
from hypothesis import given, settings, strategies as st

from cyclonorm.group_ring import (
    GroupRingElement,
    idempotent_mod_p,
    primitive_root,
    subgroup_fix_test,
    subgroups,
    weights,
)

PRIMES = [5, 7, 11, 13]


def elements(p, lo=-9, hi=9):
    return st.tuples(*([st.integers(lo, hi)] * (p - 1))).map(
        lambda t: GroupRingElement(p, t))


@pytest.mark.parametrize("p", PRIMES)
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_ring_axioms(p, data):
    a = data.draw(elements(p))
    b = data.draw(elements(p))
    c = data.draw(elements(p))
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c


def test_group_law_examples():
    s = GroupRingElement.sigma
    assert s(5, 2) * s(5, 3) == s(5, 1)
    e = s(5, 2) + s(5, 4)
    assert e * GroupRingElement.one(5) == e
    assert s(7, 2) * (s(7, 2) + s(7, 3)) == s(7, 4) + s(7, 6)


def test_weights_examples():
    # first generator support: sigma_2 + sigma_4 at p = 5
    psi1 = GroupRingElement.sigma(5, 2) + GroupRingElement.sigma(5, 4)
    w = weights(psi1)
    assert w.absolute == 2 and w.relative == 1 and w.nonnegative

    top = GroupRingElement(5, (1, 2, 3, 4))
    w = weights(top)
    assert w.absolute == 10 and w.relative == 5

    single = GroupRingElement.from_inverse_coeffs(5, {1: 1})
    w = weights(single)
    assert w.absolute == 1 and w.relative is None


@pytest.mark.parametrize("p", PRIMES)
def test_weights_additive_on_positive(p):
    import random
    rng = random.Random(p)
    for _ in range(20):
        a = GroupRingElement(p, tuple(rng.randrange(0, 5) for _ in range(p - 1)))
        b = GroupRingElement(p, tuple(rng.randrange(0, 5) for _ in range(p - 1)))
        wa, wb, wab = weights(a), weights(b), weights(a + b)
        assert wab.absolute == wa.absolute + wb.absolute
        if wa.relative is not None and wb.relative is not None:
            assert wab.relative == wa.relative + wb.relative


@pytest.mark.parametrize("p", PRIMES)
def test_idempotent_relations(p):
    es = [idempotent_mod_p(p, k) for k in range(p - 1)]
    one = GroupRingElement.one(p, p)
    total = GroupRingElement.zero(p, p)
    for e in es:
        assert e.element * e.element == e.element
        total = total + e.element
    assert total == one
    for i in range(p - 1):
        for j in range(i + 1, p - 1):
            assert (es[i].element * es[j].element).is_zero()
    # conjugation sign and the character twist
    for k in range(p - 1):
        assert es[k].element.conjugate() == es[k].element.scale(pow(p - 1, k, p)).reduce(p)
        for m in range(1, p):
            lhs = GroupRingElement.sigma(p, m, p) * es[k].element
            assert lhs == es[k].element.scale(pow(m, k, p)).reduce(p)


def test_idempotent_examples():
    e0 = idempotent_mod_p(5, 0).element
    assert e0 == GroupRingElement.norm_element(5).scale(4).reduce(5)
    # sigma_2 e_1 = 2 e_1
    e1 = idempotent_mod_p(5, 1).element
    assert GroupRingElement.sigma(5, 2, 5) * e1 == e1.scale(2).reduce(5)


def test_subgroups_enumeration():
    assert primitive_root(5) == 2
    subs5 = subgroups(5)
    assert [o for o, _ in subs5] == [1, 2, 4]
    # order 2 subgroup of (Z/5)^x is generated by 4
    assert dict(subs5)[2] == 4


def test_subgroup_fix_examples():
    norm = GroupRingElement.norm_element(5)
    assert {o for o, _ in subgroup_fix_test(norm)} == {1, 2, 4}

    psi1 = GroupRingElement.sigma(5, 2) + GroupRingElement.sigma(5, 4)
    assert [o for o, _ in subgroup_fix_test(psi1)] == [1]

    psi1_7 = GroupRingElement.from_inverse_coeffs(7, {4: 1, 5: 1, 6: 1})
    assert [o for o, _ in subgroup_fix_test(psi1_7)] == [1]


def test_modulus_mismatch_rejected():
    a = GroupRingElement.zero(5)
    b = GroupRingElement.zero(5, 5)
    with pytest.raises(ValueError):
        a * b
    with pytest.raises(ValueError):
        GroupRingElement.zero(5) * GroupRingElement.zero(7)
