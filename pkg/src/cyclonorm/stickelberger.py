"""Generators and structure of the Stickelberger ideal.

Fuchsian and Fueter elements, the Fermat quotient map, modified idempotents,
Bernoulli numbers mod p computed along two independent routes, and the
irregularity profile.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .group_ring import (
    GroupRingElement,
    idempotent_mod_p,
    is_prime,
    subgroup_fix_test,
    weights,
)


class ConstructionFailed(Exception):
    """No element with the requested properties exists at this prime."""


@dataclass
class StickelbergerContext:
    p: int
    _fuchsian: Dict[int, GroupRingElement] = field(default_factory=dict)
    _fueter: Dict[int, GroupRingElement] = field(default_factory=dict)
    _bernoulli: Optional[Dict[int, int]] = None

    def __post_init__(self):
        if not is_prime(self.p) or self.p < 3:
            raise ValueError(f"p must be an odd prime, got {self.p}")


def fuchsian(ctx: StickelbergerContext, n: int) -> GroupRingElement:
    """Theta_n = (n - sigma_n) * (1/p) sum c sigma_c^{-1}, coefficients floor(nc/p)."""
    p = ctx.p
    if not 2 <= n <= p:
        raise ValueError(f"Fuchsian index {n} outside 2..{p}")
    if n not in ctx._fuchsian:
        ctx._fuchsian[n] = GroupRingElement(
            p, tuple((n * c) // p for c in range(1, p))
        )
    return ctx._fuchsian[n]


def fueter(ctx: StickelbergerContext, n: int) -> GroupRingElement:
    """psi_n = Theta_{n+1} - Theta_n, a positive relative-weight-1 generator."""
    p = ctx.p
    if not 1 <= n <= (p - 1) // 2:
        raise ValueError(f"Fueter index {n} outside 1..{(p-1)//2}")
    if n not in ctx._fueter:
        if n == 1:
            elem = fuchsian(ctx, 2)
        else:
            elem = fuchsian(ctx, n + 1) - fuchsian(ctx, n)
        ctx._fueter[n] = elem
    return ctx._fueter[n]


def all_fueter(ctx: StickelbergerContext) -> List[GroupRingElement]:
    return [fueter(ctx, n) for n in range(1, (ctx.p - 1) // 2 + 1)]


def fermat_quotient(ctx: StickelbergerContext, t: GroupRingElement) -> int:
    """phi(t) = sum_c c^{p-2} n_c mod p; satisfies zeta^t = zeta^{phi(t)}."""
    p = ctx.p
    if t.p != p:
        raise ValueError("mismatched primes")
    coeffs = t.coeffs
    return sum(pow(c, p - 2, p) * coeffs[c - 1] for c in range(1, p)) % p


def fermat_quotient_classical(p: int, n: int) -> int:
    """(n^p - n)/p mod p, the closed form for the Fuchsian elements."""
    return ((pow(n, p, p * p) - n) // p) % p


# -- Bernoulli numbers, two routes ---------------------------------------------------


def teichmuller_lift(p: int, a: int) -> int:
    """omega(a) mod p^2: the unique (p-1)-st root of unity congruent to a."""
    return pow(a, p, p * p)


def bernoulli_mod_p_teichmuller(p: int, k: int) -> int:
    """B_{1, omega^{-k}} mod p via (1/p) sum a * omega(a)^{-k}, work mod p^2.

    Defined for k not congruent to 1 mod p-1 (the k = 1 value has a pole).
    """
    if k % (p - 1) == 1:
        raise ValueError("the k = 1 generalized Bernoulli value is not p-integral")
    psq = p * p
    exp = (-k) % (p - 1)
    total = 0
    for a in range(1, p):
        total = (total + a * pow(teichmuller_lift(p, a), exp, psq)) % psq
    if total % p != 0:
        raise ArithmeticError("character sum not divisible by p")
    return (total // p) % p


@functools.lru_cache(maxsize=None)
def bernoulli_rational(m: int) -> Fraction:
    """Exact rational Bernoulli number B_m (B_1 = -1/2 convention)."""
    if m == 0:
        return Fraction(1)
    # sum_{j=0}^{m} C(m+1, j) B_j = 0
    total = Fraction(0)
    comb = 1  # C(m+1, j) built incrementally
    for j in range(m):
        total += comb * bernoulli_rational(j)
        comb = comb * (m + 1 - j) // (j + 1)
    return -total / (m + 1)


def bernoulli_mod_p_kummer(p: int, k: int) -> int:
    """B_{1, omega^{-k}} mod p via the congruence with B_{p-k}/(p-k), odd k >= 3."""
    if k % 2 == 0 or not 3 <= k <= p - 2:
        raise ValueError("classical route needs odd k with 3 <= k <= p-2")
    m = p - k
    b = bernoulli_rational(m)
    if b.denominator % p == 0:
        raise ArithmeticError("von Staudt-Clausen denominator divisible by p")
    num = b.numerator % p
    den_inv = pow(b.denominator % p, p - 2, p)
    m_inv = pow(m % p, p - 2, p)
    return num * den_inv * m_inv % p


def bernoulli_table(ctx: StickelbergerContext) -> Dict[int, int]:
    """{odd k in 3..p-2: B_{1, omega^{-k}} mod p}, cross-checked along both routes."""
    if ctx._bernoulli is None:
        p = ctx.p
        table = {}
        for k in range(3, p - 1, 2):
            v1 = bernoulli_mod_p_teichmuller(p, k)
            v2 = bernoulli_mod_p_kummer(p, k)
            if v1 != v2:
                raise ArithmeticError(
                    f"Bernoulli cross-check mismatch at p={p}, k={k}: {v1} != {v2}"
                )
            table[k] = v1
        ctx._bernoulli = table
    return ctx._bernoulli


# -- modified idempotents -------------------------------------------------------------


def theta_p(ctx: StickelbergerContext) -> GroupRingElement:
    return fuchsian(ctx, ctx.p)


def modified_idempotent(ctx: StickelbergerContext, k: int) -> GroupRingElement:
    """E_k in F_p[G]: the Stickelberger multiple of e_k.

    E_k = B_{1, omega^{-k}} e_k for odd k >= 3; the k = 1 member is fixed by
    the convention E_1 = -Theta_p (so E_1 = e_1 in F_p[G] and phi(E_1) = 1).
    """
    p = ctx.p
    if k % 2 == 0 or not 1 <= k <= p - 2:
        raise ValueError("modified idempotents are indexed by odd k in 1..p-2")
    if k == 1:
        return (-theta_p(ctx)).reduce(p)
    b = bernoulli_table(ctx)[k]
    return idempotent_mod_p(p, k).element.scale(b).reduce(p)


@dataclass(frozen=True)
class BernoulliProfile:
    p: int
    table: Dict[int, int]            # odd k in 3..p-2 -> B_{1, omega^{-k}} mod p
    irregular_indices: Tuple[int, ...]   # odd k with vanishing value
    irregularity_index: int          # i_p
    surviving: Tuple[int, ...]       # R_p = {odd k nonvanishing} + {1}
    surviving_count: int             # r_p = |R_p|
    minus_part_rank: int             # rank over F_p of (1 - conj) * Fueter span
    lepisto_ok: bool                 # i_p < (p-1)/4
    rank_matches: bool               # minus_part_rank == r_p
    rank_lower_bound_ok: bool        # r_p >= (p-1)/4


def minus_part_rank(ctx: StickelbergerContext) -> int:
    """Rank over F_p of the span of (1 - conj) sigma_c psi_n for all c, n."""
    p = ctx.p
    rows = []
    for n in range(1, (p - 1) // 2 + 1):
        psi = fueter(ctx, n)
        for c in range(1, p):
            elem = GroupRingElement.sigma(p, c) * psi
            rows.append([(a - b) % p for a, b in zip(elem.coeffs, elem.conjugate().coeffs)])
    return _rank_mod_p(rows, p)


def _rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    mat = [list(r) for r in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(mat)) if mat[i][col] % p), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = pow(mat[rank][col], p - 2, p)
        mat[rank] = [v * inv % p for v in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][col] % p:
                f = mat[i][col]
                mat[i] = [(a - f * b) % p for a, b in zip(mat[i], mat[rank])]
        rank += 1
    return rank


def bernoulli_profile(ctx: StickelbergerContext) -> BernoulliProfile:
    p = ctx.p
    table = bernoulli_table(ctx)
    irregular = tuple(sorted(k for k, v in table.items() if v == 0))
    i_p = len(irregular)
    surviving = tuple(sorted([1] + [k for k, v in table.items() if v != 0]))
    r_p = len(surviving)
    rank = minus_part_rank(ctx)
    return BernoulliProfile(
        p=p,
        table=dict(table),
        irregular_indices=irregular,
        irregularity_index=i_p,
        surviving=surviving,
        surviving_count=r_p,
        minus_part_rank=rank,
        lepisto_ok=4 * i_p < p - 1,
        rank_matches=rank == r_p,
        rank_lower_bound_ok=4 * r_p >= p - 1,
    )


# -- the weight-two annihilator ---------------------------------------------------------


@dataclass(frozen=True)
class Annihilator:
    element: GroupRingElement
    recipe: str                      # 'double-fueter' | 'two-term' | 'search'
    quotient: int                    # phi value, always 0
    fixed_by: Tuple[Tuple[int, int], ...]  # nontrivial fixing subgroups (order, gen)

    @property
    def is_unfixed(self) -> bool:
        return not self.fixed_by


def _candidate(ctx, elem, recipe) -> Annihilator:
    q = fermat_quotient(ctx, elem)
    fixing = tuple((o, g) for o, g in subgroup_fix_test(elem) if o > 1)
    return Annihilator(elem, recipe, q, fixing)


def construct_weight2_annihilator(
    ctx: StickelbergerContext, require_unfixed: bool = True
) -> Annihilator:
    """A positive relative-weight-2 element with vanishing Fermat quotient.

    Primary recipe: 2 psi_n when some phi(psi_n) = 0, else
    sigma_a psi_1 + sigma_b psi_2 with a = phi(psi_2), b = -phi(psi_1).
    Fallback: exhaustive search over sigma_a psi_m + sigma_b psi_n.  With
    require_unfixed the result must in addition not be fixed by any nontrivial
    subgroup; at p in {5, 7} no such element exists and ConstructionFailed is
    raised (the norm element is the only quotient-zero candidate at 5, and the
    survivors at 7 are fixed by the order-3 subgroup).
    """
    p = ctx.p
    if p < 5:
        raise ValueError("needs p >= 5")
    half = (p - 1) // 2
    candidates: List[Annihilator] = []

    for n in range(1, half + 1):
        if fermat_quotient(ctx, fueter(ctx, n)) == 0:
            candidates.append(_candidate(ctx, fueter(ctx, n).scale(2), "double-fueter"))

    a = fermat_quotient(ctx, fueter(ctx, 2))
    b = (-fermat_quotient(ctx, fueter(ctx, 1))) % p
    if a != 0 and b != 0:
        elem = GroupRingElement.sigma(p, a) * fueter(ctx, 1) \
            + GroupRingElement.sigma(p, b) * fueter(ctx, 2)
        if fermat_quotient(ctx, elem) == 0:
            candidates.append(_candidate(ctx, elem, "two-term"))

    norm = GroupRingElement.norm_element(p)
    for cand in candidates:
        if cand.element != norm and weights(cand.element).relative == 2 and cand.is_unfixed:
            return cand

    # Exhaustive fallback, smallest (m, n, a, b) first.  Preference order:
    # unfixed non-norm > subgroup-fixed non-norm > the norm element.
    fixed_fallback: Optional[Annihilator] = None
    norm_fallback: Optional[Annihilator] = None
    for m in range(1, half + 1):
        qm = fermat_quotient(ctx, fueter(ctx, m))
        for n in range(m, half + 1):
            qn = fermat_quotient(ctx, fueter(ctx, n))
            for a in range(1, p):
                for b in range(1, p):
                    if (a * qm + b * qn) % p != 0:
                        continue
                    elem = GroupRingElement.sigma(p, a) * fueter(ctx, m) \
                        + GroupRingElement.sigma(p, b) * fueter(ctx, n)
                    if weights(elem).relative != 2:
                        continue
                    cand = _candidate(ctx, elem, "search")
                    if elem == norm:
                        norm_fallback = norm_fallback or cand
                    elif cand.is_unfixed:
                        return cand
                    else:
                        fixed_fallback = fixed_fallback or cand
    if not require_unfixed:
        best = fixed_fallback or norm_fallback
        if best is not None:
            return best
    raise ConstructionFailed(
        f"no positive relative-weight-2 element with zero Fermat quotient and "
        f"trivial stabilizer exists at p={p}"
    )
