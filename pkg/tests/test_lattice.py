import random

import pytest

from cyclonorm import linalg
from cyclonorm.cyclotomic import CycloInt
from cyclonorm.lattice import (
    SolverIncomplete,
    perturb_for_independence,
    bound_clash,
    default_vanishing_order,
    displayed_chain_holds,
    hadamard_bv,
    inhomogeneous_select,
    lemma9_size_bound,
    order_rank,
    order_unrank,
    read_matrix,
    read_witness,
    siegel_solve,
    sum_preservation_check,
    theorem2_feasible,
    theorem3_feasible,
    threshold_pair,
    write_matrix,
    write_witness,
)
from cyclonorm.series import DoubleTable, binom_coeffs, double_table
from cyclonorm.semilocal import synthetic_root_of_unity
from cyclonorm.stickelberger import StickelbergerContext, fueter


def test_order_examples():
    assert order_rank((0, 0)) == 1
    assert order_rank((1, 0)) == 2
    assert order_rank((0, 1)) == 3
    assert order_rank((2, 0)) == 4


def test_order_bijection():
    for n in range(1, 10 ** 4 + 1):
        assert order_rank(order_unrank(n)) == n
    pairs = [order_unrank(n) for n in range(1, 200)]
    for a, b in zip(pairs, pairs[1:]):
        assert (sum(a), a[1]) < (sum(b), b[1])


@pytest.mark.parametrize("p", [5, 7, 11, 13, 41, 43])
def test_threshold_pair(p):
    mu, chi = threshold_pair(p)
    s = mu + chi
    assert order_rank((mu, chi)) == p - 1
    assert s * (s + 1) // 2 < p - 1 <= (s + 1) * (s + 2) // 2
    assert s < p - 1   # the pair sums stay below the prime, so denominators
    assert s < p       # carry no factorial contribution


def test_hadamard_bv_examples():
    box, hadamard_ok = hadamard_bv([[1, 1, 1, 1, 1]], 5)
    assert box.gram_det == 5 and hadamard_ok
    assert abs(box.sup_bound_float() - 5 ** 0.125) < 1e-12
    assert box.sup_bound_int() == 1
    # orthogonal rows: the Hadamard estimate is an equality
    rows = [[2, 0, 0, 0], [0, 3, 0, 0]]
    box2, _ = hadamard_bv(rows, 4)
    assert box2.gram_det == 36 == 4 * 9
    with pytest.raises(ValueError):
        hadamard_bv([[1, 0], [0, 1]], 2)
    with pytest.raises(ValueError):
        hadamard_bv([[1, 1, 0], [2, 2, 0]], 3)


def test_siegel_all_ones_example():
    w = siegel_solve([[1, 1, 1, 1, 1]], 5)
    assert sum(w) == 0 and any(w)
    assert max(abs(x) for x in w) <= 1


def test_siegel_with_trace_zero_row():
    rows = [[1, 2, 3, 4, 5, 6], [1, 1, 1, 1, 1, 1]]
    w = siegel_solve(rows, 6)
    assert any(w)
    assert sum(w) == 0
    assert sum(a * b for a, b in zip(rows[0], w)) == 0


def test_siegel_random_against_box_oracle():
    rng = random.Random(7)
    done = 0
    while done < 50:
        nrows = rng.randrange(1, 4)
        ambient = rng.randrange(nrows + 2, 9)
        a = [[rng.randrange(-10, 11) for _ in range(ambient)] for _ in range(nrows)]
        if linalg.rank_rational(a) < nrows:
            continue
        box, _ = hadamard_bv(a, ambient)
        bound = max(box.sup_bound_int(), 1)
        w = siegel_solve(a, ambient, bound)
        assert any(w)
        assert all(sum(x * y for x, y in zip(row, w)) == 0 for row in a)
        assert max(abs(x) for x in w) <= bound
        # oracle: some vector within the box exists (the solver found one)
        done += 1


def test_siegel_solver_incomplete():
    # full-rank square system: kernel is trivial
    with pytest.raises(SolverIncomplete):
        siegel_solve([[1, 0], [0, 1]], 2, 5)


def test_matrix_file_roundtrip(tmp_path):
    rows = [[1, -2, 3], [0, 4, -5]]
    path = tmp_path / "mat.txt"
    write_matrix(str(path), rows)
    assert read_matrix(str(path)) == rows
    wpath = tmp_path / "wit.txt"
    write_witness(str(wpath), [1, 0, -7])
    assert read_witness(str(wpath)) == [1, 0, -7]


# -- the perturbation pass -------------------------------------------------------------


def genuine_table(p=5, y=106, x=3, depth=6, seed=0):
    tab = binom_coeffs(fueter(StickelbergerContext(p), 1).scale(2), depth + 2, full=True)
    rho = synthetic_root_of_unity(p, y, depth + 2, seed=seed)
    return tab, double_table(tab, rho, x, y, depth=depth)


def synthetic_table(p, y, x, depth, seed, plant=True):
    rng = random.Random(seed)
    entries = {}
    for s in range(depth + 1):
        for h in range(s + 1):
            n = s - h
            entries[(n, h)] = CycloInt(
                p, tuple(rng.randrange(-(y // 2) + 1, y // 2 + 1) for _ in range(p - 1)))
    if plant:
        entries[(1, 0)] = entries[(0, 0)]
        entries[(1, 1)] = entries[(0, 1)]
    rho = synthetic_root_of_unity(p, y, depth + 1, seed=seed)
    return DoubleTable(p, p, x, y, depth, True, rho, entries)


def test_perturbation_on_genuine_table():
    tab, dt = genuine_table()
    mt = perturb_for_independence(dt)
    assert mt.rank_certificate()
    assert sum_preservation_check(mt, 5)
    worst, ok = mt.sup_certificate()
    assert ok


def test_perturbation_synthetic_tables_certificates():
    p, y, x = 5, 106, 3
    actions = set()
    for seed in range(20):
        dt = synthetic_table(p, y, x, 5, seed)
        mt = perturb_for_independence(dt)
        assert mt.ranks == list(range(1, p))                     # full rank growth
        assert sum_preservation_check(mt, 5)                     # sum kept, mod y^5
        worst, ok = mt.sup_certificate()
        assert ok and worst < y                                  # digit size bound
        carry, carry_ok = mt.carry_certificate()
        assert carry_ok and carry <= p - 1                       # per-step carry
        assert any(s.action != "independent" for s in mt.steps)  # dependency hit
        actions.update(s.action for s in mt.steps)
    assert "rebalanced" in actions


def test_perturbation_identity_when_independent():
    # a table that is already independent comes back unchanged with d = 1
    p, y, x = 5, 106, 3
    for seed in range(40):
        dt = synthetic_table(p, y, x, 5, seed + 1000, plant=False)
        mt = perturb_for_independence(dt)
        if all(s.action == "independent" for s in mt.steps):
            assert mt.entries == dt.entries
            assert not mt.divisors
            break
    else:
        pytest.fail("no spontaneously independent table found")


def test_perturbation_guards():
    p, y, x = 5, 8, 3
    dt = synthetic_table(p, 106, x, 5, 0)
    small = DoubleTable(p, p, x, y, 5, True, dt.rho, dt.entries)
    with pytest.raises(ValueError):
        perturb_for_independence(small)          # y <= 2p without the override
    shallow = DoubleTable(p, p, x, 106, 1, True, dt.rho,
                          {k: v for k, v in dt.entries.items() if sum(k) <= 1})
    with pytest.raises(ValueError):
        perturb_for_independence(shallow)        # missing forward guard entries


def test_twist_selection_toy_scale():
    tab, dt = genuine_table()
    mt = perturb_for_independence(dt)
    sel = inhomogeneous_select(mt)
    assert sel.homogeneous_ok
    assert sel.pivot_pairing != 0
    assert sel.leading_digit_ok
    assert sel.waivers          # toy scale must record its waivers
    w = sel.witness
    # orthogonality certificates, recomputed from scratch
    from fractions import Fraction
    for pair in mt.processed:
        if sum(pair) <= sel.level and pair != (sel.level, 0):
            assert Fraction((w * mt.entries[pair]).trace()) == 0
    assert Fraction((w * mt.entries[(sel.level, 0)]).trace()) == sel.pivot_pairing


def test_twist_selection_p7():
    p, y, x = 7, 211, 2
    tab = binom_coeffs(fueter(StickelbergerContext(p), 1).scale(2), 9, full=True)
    rho = synthetic_root_of_unity(p, y, 9)
    dt = double_table(tab, rho, x, y, depth=7)
    mt = perturb_for_independence(dt)
    sel = inhomogeneous_select(mt)
    assert sel.trace_zero
    assert sel.homogeneous_ok and sel.pivot_pairing != 0 and sel.leading_digit_ok
    assert sel.pivot_pairing == -p * int(sel.witness.coords[(p - sel.twist_index) - 1])


# -- inequality evaluators -------------------------------------------------------------


def test_displayed_chain_boundary():
    assert not displayed_chain_holds(41, 83)     # boundary prime: fails
    assert displayed_chain_holds(43, 87)         # first prime past it: holds
    assert displayed_chain_holds(43, 2 * 43 + 1)
    assert not displayed_chain_holds(40, 1000)


def test_bound_clash_examples():
    p, y = 43, 87
    z = y - 1
    verdict = bound_clash(p, y, z, level=4)
    lhs = 4 * z ** 4 * p ** 2 * (p - 1) * y
    rhs = y ** 8
    assert verdict.upper_dominates == (lhs < rhs)
    # monotone: growing y eventually flips to upper-dominates and stays
    z, lvl = 2 * 5 + 1, 4
    flipped = False
    for y in range(12, 4000, 7):
        v = bound_clash(5, y, z, level=lvl)
        if flipped:
            assert v.upper_dominates
        elif v.upper_dominates:
            flipped = True
    assert flipped


def test_variant_feasibility():
    assert default_vanishing_order(64) == 6
    assert theorem2_feasible(67)
    assert theorem2_feasible(43)
    assert theorem2_feasible(23)
    assert not theorem2_feasible(19)
    assert not theorem2_feasible(5, 4)
    for p in (13, 37, 101):
        assert theorem3_feasible(p, 5)
        assert not theorem3_feasible(p, 4)
    assert lemma9_size_bound(5, 7)
    assert (2 * 5) ** 7 // 5 == 2 * 10 ** 6      # the (5, 7) chain numbers
    assert 2 * 10 ** 6 > (2 * 7) ** 4
