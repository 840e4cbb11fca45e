"""Integer-lattice machinery for the coefficient tables.

The index order and its counting function, the digit-perturbation pass that
forces linear independence of the coefficient vectors while preserving
the summed series and the digit size bounds,
Hadamard / box-lemma bounds, a certified small-kernel-vector solver, the
inhomogeneous twist selection, and the final inequality evaluators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .cyclotomic import CycloInt, kappa_int, kappa_inv
from .semilocal import SemilocalElement, balanced_digit, sl_embed
from .series import DoubleTable, denominator_exponent, reassemble


class SolverIncomplete(Exception):
    """The bounded search missed a vector the box lemma guarantees: a bug."""


class RankStuck(Exception):
    """No basis vector escapes the current span: impossible below full rank."""


# -- the index order --------------------------------------------------------------------


def order_rank(pair: Tuple[int, int]) -> int:
    """Position (1-based) of (j, k) in the order by (j+k, k)."""
    j, k = pair
    if j < 0 or k < 0:
        raise ValueError("pairs have nonnegative entries")
    s = j + k
    return s * (s + 1) // 2 + k + 1


def order_unrank(n: int) -> Tuple[int, int]:
    if n < 1:
        raise ValueError("ranks are 1-based")
    s = 0
    while (s + 1) * (s + 2) // 2 < n:
        s += 1
    k = n - s * (s + 1) // 2 - 1
    return (s - k, k)


def threshold_pair(p: int) -> Tuple[int, int]:
    """The pair of rank p-1: the last one needed for a full basis."""
    return order_unrank(p - 1)


# -- the perturbation pass --------------------------------------------------------------


@dataclass
class PerturbStep:
    pair: Tuple[int, int]
    action: str                      # 'independent' | 'rebalanced' | 'basis-twist'
    twist_index: Optional[int]
    carry_sup: int                   # |kappa(s)|_sup of the carried correction


@dataclass
class ModifiedTable:
    source: DoubleTable
    entries: Dict[Tuple[int, int], CycloInt]
    divisors: Dict[Tuple[int, int], int]          # d(n, h) in {1, p}
    processed: List[Tuple[int, int]]
    steps: List[PerturbStep]
    ranks: List[int]

    @property
    def p(self) -> int:
        return self.source.p

    def rank_certificate(self) -> bool:
        return self.ranks == list(range(1, len(self.ranks) + 1))

    def sup_certificate(self) -> Tuple[int, bool]:
        worst = 0
        for (n, h), e in self.entries.items():
            worst = max(worst, max(abs(int(c)) for c in e.coords))
        return worst, worst < self.source.y

    def carry_certificate(self) -> Tuple[int, bool]:
        worst = max((s.carry_sup for s in self.steps), default=0)
        return worst, worst <= self.p - 1


def reassemble_modified(mtable: ModifiedTable, precision: int) -> SemilocalElement:
    """The perturbed double sum mod y^precision, divisors included."""
    src = mtable.source
    m = src.y ** precision
    inv_q = pow(src.q % m, -1, m)
    inv_x = pow(src.x % m, -1, m)
    acc = SemilocalElement(src.p, m, (0,) * (src.p - 1))
    for (n, h), digit in mtable.entries.items():
        if n + h >= precision:
            continue
        scalar = pow(src.y, n + h, m) * pow(inv_q, denominator_exponent(n, src.q), m) % m
        d = mtable.divisors.get((n, h), 1)
        if d != 1:
            scalar = scalar * pow(d, -1, m) % m
        if not src.absorb_x:
            scalar = scalar * pow(inv_x, n, m) % m
        acc = acc + sl_embed(src.p, digit, m).scale(scalar)
    return acc


def perturb_for_independence(dtable: DoubleTable, toy_override: bool = False) -> ModifiedTable:
    """Perturb the digit table until the coefficient vectors are independent.

    Processes pairs in the index order up to rank p-1.  A dependent entry b
    is combined with its forward neighbour: p b = b' + y s with b' the
    balanced residue, |kappa(s)| <= p-1; if b' is still dependent, a basis
    vector y zeta^j is moved across the two terms.  The series sum is
    preserved exactly (denominator flags d in {1, p}), every modified entry
    keeps sup-norm < y, and only the forward neighbour is ever touched.
    """
    p, y = dtable.p, dtable.y
    if not dtable.absorb_x:
        raise ValueError("the perturbation pass expects x-absorbed rows")
    if y <= 2 * p and not toy_override:
        raise ValueError("needs y > 2p (pass toy_override to waive)")
    mu_chi = threshold_pair(p)
    need = [order_unrank(i) for i in range(1, p)]
    for (n, h) in need:
        if (n + 1, h) not in dtable.entries:
            raise ValueError("digit table lacks the forward guard entries")
        if n + 1 >= p:
            raise ValueError("denominator bookkeeping requires pair sums below p")

    entries = dict(dtable.entries)
    divisors: Dict[Tuple[int, int], int] = {}
    steps: List[PerturbStep] = []
    ranks: List[int] = []
    space = linalg.RowSpace()

    for pair in need:
        n, h = pair
        current = entries[pair]
        vec = kappa_int(current)
        if space.add(vec):
            steps.append(PerturbStep(pair, "independent", None, 0))
            ranks.append(space.rank)
            continue
        scaled = [p * int(c) for c in current.coords]
        residue = [balanced_digit(c, y) for c in scaled]
        carry = [(c - r) // y for c, r in zip(scaled, residue)]
        carry_sup = max(abs(c) for c in carry) if carry else 0
        base = CycloInt(p, tuple(residue))
        ahead = entries[(n + 1, h)]
        if space.add(residue):
            entries[pair] = base
            entries[(n + 1, h)] = ahead + CycloInt(p, tuple(carry))
            divisors[pair] = p
            steps.append(PerturbStep(pair, "rebalanced", None, carry_sup))
            ranks.append(space.rank)
            continue
        # Twist by y zeta^j, signed away from the residue coordinate so the
        # twisted coordinate stays within (-y, y]; pick the smallest escaping
        # j, preferring a strictly smaller sup-norm.
        choices = []
        for j in range(1, p):
            sign = -1 if int(residue[j - 1]) > 0 else 1
            cand = list(residue)
            cand[j - 1] += sign * y
            if not space.contains(cand):
                choices.append((0 if abs(cand[j - 1]) < y else 1, j, sign, cand))
        if not choices:
            raise RankStuck(f"no basis vector escapes the span at pair {pair}")
        _, j, sign, cand = min(choices)
        space.add(cand)
        entries[pair] = CycloInt(p, tuple(cand))
        zeta_j = CycloInt.zeta_power(p, j)
        entries[(n + 1, h)] = ahead + CycloInt(p, tuple(carry)) - zeta_j.scale(sign)
        divisors[pair] = p
        steps.append(PerturbStep(pair, "basis-twist", sign * j, carry_sup))
        ranks.append(space.rank)

    return ModifiedTable(dtable, entries, divisors, need, steps, ranks)


def sum_preservation_check(mtable: ModifiedTable, precision: int) -> bool:
    """The perturbed sum equals the original double sum mod y^precision."""
    return reassemble_modified(mtable, precision) == reassemble(mtable.source, precision)


# -- Hadamard and box-lemma bounds ------------------------------------------------------------


@dataclass(frozen=True)
class BoxBound:
    gram_det: int
    rows: int
    ambient: int

    @property
    def codimension(self) -> int:
        return self.ambient - self.rows

    def sup_bound_float(self) -> float:
        """(sqrt gram_det)^(1/(ambient - rows)) as a float, for reports."""
        if self.codimension <= 0:
            raise ValueError("no free directions")
        return self.gram_det ** (1.0 / (2 * self.codimension))

    def sup_bound_int(self) -> int:
        """floor of the bound: any integer vector within it has sup <= this."""
        return linalg.iroot(self.gram_det, 2 * self.codimension)

    def less_than_sqrt(self, y: int) -> bool:
        """Bound < sqrt(y), exactly: gram_det < y^codimension."""
        return self.gram_det < y ** self.codimension


def hadamard_bv(rows: Sequence[Sequence[int]], ambient: int) -> Tuple[BoxBound, bool]:
    """Exact Gram determinant with its Hadamard estimate.

    Returns the box bound data and whether det(G) <= prod G_ii holds
    (it always does; equality exactly for orthogonal rows).
    """
    if len(rows) >= ambient:
        raise ValueError("need strictly fewer rows than the ambient dimension")
    gram = linalg.gram_matrix(rows)
    det = linalg.bareiss_det(gram)
    if det == 0:
        raise ValueError("rows are linearly dependent")
    diag_prod = 1
    for i in range(len(gram)):
        diag_prod *= gram[i][i]
    return BoxBound(det, len(rows), ambient), det <= diag_prod


def siegel_solve(rows: Sequence[Sequence[int]], ambient: int,
                 bound: Optional[int] = None) -> List[int]:
    """A nonzero integer kernel vector with sup-norm within the box bound.

    Kernel basis by exact unimodular elimination, reduced, then searched;
    exhaustive scan of the whole box when it is small.  Deterministic: the
    (sup-norm, coordinates)-smallest admissible vector wins, sign-normalized.
    """
    rows = [list(r) for r in rows]
    if any(len(r) != ambient for r in rows):
        raise ValueError("row length must match the ambient dimension")
    if bound is None:
        box, _ = hadamard_bv(rows, ambient)
        bound = box.sup_bound_int()
    if bound < 1:
        bound = 1

    def canonical(v: List[int]) -> Tuple[int, Tuple[int, ...]]:
        first = next(x for x in v if x)
        if first < 0:
            v = [-x for x in v]
        return (max(abs(x) for x in v), tuple(v))

    # exhaustive scan for small boxes
    if (2 * bound + 1) ** ambient <= 10 ** 6:
        best = None
        for vec in _box_vectors(ambient, bound):
            if any(vec) and all(sum(a * b for a, b in zip(row, vec)) == 0 for row in rows):
                key = canonical(list(vec))
                if best is None or key < best:
                    best = key
        if best is None:
            raise SolverIncomplete("no kernel vector inside the box")
        return list(best[1])

    kernel = linalg.integer_kernel(rows, ambient)
    if not kernel:
        raise SolverIncomplete("kernel is trivial")
    reduced = linalg.lll_reduce(kernel)
    candidates = [canonical(list(v)) for v in reduced if any(v)]
    best = min(candidates)
    radius = min(best[0], bound)
    limit = Fraction(ambient * radius * radius)
    count = 0
    for vec in linalg.enumerate_short_vectors(reduced, limit):
        count += 1
        if count > 200_000:
            break
        if max(abs(x) for x in vec) <= bound:
            key = canonical(list(vec))
            if key < best:
                best = key
    if best[0] > bound:
        raise SolverIncomplete("search exhausted without an admissible vector")
    return list(best[1])


def _box_vectors(dim: int, radius: int):
    if dim == 0:
        yield ()
        return
    for head in range(-radius, radius + 1):
        for tail in _box_vectors(dim - 1, radius):
            yield (head,) + tail


# -- the inhomogeneous twist selection --------------------------------------------------------


@dataclass
class TwistSelection:
    witness: CycloInt                # w, trace zero unless the row was waived
    twist_index: int                 # k with the twisted condition
    level: int                       # pivot pair is (level, 0)
    pivot_pairing: int               # Tr(w * pivot entry), nonzero
    box_radius: int
    homogeneous_ok: bool             # Tr(w * entry) = 0 on every other pair
    trace_zero: bool
    leading_digit_ok: bool           # series-side leading coefficient reproduces it
    waivers: Tuple[str, ...]


def _ring_trace(u: SemilocalElement) -> int:
    total = u
    for c in range(2, u.p):
        total = total + u.galois(c)
    vals = set(total.poly)
    if len(vals) != 1:
        raise ArithmeticError("trace image is not rational")
    return (-vals.pop()) % u.modulus


def inhomogeneous_select(mtable: ModifiedTable, level: Optional[int] = None,
                         radius: Optional[int] = None) -> TwistSelection:
    """A short trace-zero vector orthogonal to every table entry except a
    twisted pivot, with a nonzero pivot pairing.

    The pivot is the entry at (level, 0); homogeneous conditions cover all
    other pairs with sum <= level.  When the ambient dimension p-1 cannot
    support the full condition count (small p), the level is lowered and the
    trace-zero row dropped as needed; every waiver is reported.
    """
    src = mtable.source
    p, y = src.p, src.y
    waivers: List[str] = []

    requested = 4 if level is None else level
    lvl = requested
    use_ones = True
    while lvl >= 1:
        nconds = (lvl + 1) * (lvl + 2) // 2 - 1 + (1 if use_ones else 0) + 1
        if nconds < p - 1:
            break
        if use_ones:
            use_ones = False
            continue
        lvl -= 1
        use_ones = True
    if lvl < 1:
        raise ValueError("ambient dimension cannot support any level")
    if lvl != requested:
        waivers.append(f"level lowered from {requested} to {lvl} (ambient dimension {p-1})")
    if not use_ones:
        waivers.append("trace-zero condition dropped (ambient dimension too small)")

    hom_pairs = [order_unrank(i) for i in range(1, (lvl + 1) * (lvl + 2) // 2 + 1)]
    pivot_pair = (lvl, 0)
    hom_pairs.remove(pivot_pair)
    for pair in hom_pairs + [pivot_pair]:
        if pair not in mtable.entries:
            raise ValueError(f"modified table lacks pair {pair}")

    def trace_row(e: CycloInt) -> List[int]:
        # Tr(w e) = sum_j (p e_{p-j} - sum_i e_i) w_j, a linear form in kappa(w)
        coords = kappa_int(e)
        total = sum(coords)
        return [p * coords[(p - c) - 1] - total for c in range(1, p)]

    base_rows = [trace_row(mtable.entries[pair]) for pair in hom_pairs]
    if use_ones:
        base_rows.append([1] * (p - 1))

    box_radius = linalg.iroot(y, 2) if radius is None else radius
    pivot = mtable.entries[pivot_pair]
    pivot_row = trace_row(pivot)

    def scan(radius_limit: int) -> Optional[Tuple]:
        for k in range(1, p):
            zeta_row = trace_row(CycloInt.zeta_power(p, k))
            rows = base_rows + [[a + b for a, b in zip(pivot_row, zeta_row)]]
            try:
                w_coords = siegel_solve(rows, p - 1, radius_limit)
            except SolverIncomplete:
                continue
            w_cand = kappa_inv(p, tuple(w_coords))
            pairing = int(Fraction((w_cand * pivot).trace()))
            if pairing == 0:
                continue
            return (k, w_coords, w_cand, pairing)
        return None

    best = scan(box_radius)
    if best is None:
        # The sqrt(y) box is guaranteed only beyond the theorem's size range;
        # fall back to the box-lemma bound of the condition rows.
        bv_radius = box_radius
        for k in range(1, p):
            zeta_row = trace_row(CycloInt.zeta_power(p, k))
            rows = base_rows + [[a + b for a, b in zip(pivot_row, zeta_row)]]
            if linalg.rank_rational(rows) == len(rows):
                box, _ = hadamard_bv(rows, p - 1)
                bv_radius = max(bv_radius, box.sup_bound_int())
        if bv_radius > box_radius:
            best = scan(bv_radius)
            if best is not None:
                waivers.append(
                    f"box radius enlarged from {box_radius} to {bv_radius} "
                    f"(box-lemma bound; the sqrt(y) box needs larger p)")
                box_radius = bv_radius
    if best is None:
        raise SolverIncomplete(
            "every twist leaves the box orthogonal to the pivot; by the "
            "dimension count this forces the zero vector, a contradiction"
        )
    k, w_coords, w, pivot_pairing = best

    hom_ok = all(int(Fraction((w * mtable.entries[pair]).trace())) == 0 for pair in hom_pairs)
    trace_zero = int(Fraction(w.trace())) == 0
    if use_ones and pivot_pairing != -p * w_coords[(p - k) - 1]:
        raise AssertionError("twisted pairing identity failed")

    leading_ok = _leading_digit_check(mtable, w, lvl, pivot_pairing)
    if not use_ones:
        waivers.append("pivot pairing validated directly (form without trace-zero row)")

    return TwistSelection(
        witness=w,
        twist_index=k,
        level=lvl,
        pivot_pairing=pivot_pairing,
        box_radius=box_radius,
        homogeneous_ok=hom_ok,
        trace_zero=trace_zero,
        leading_digit_ok=leading_ok,
        waivers=tuple(waivers),
    )


def _leading_digit_check(mtable: ModifiedTable, w: CycloInt, lvl: int,
                         pivot_pairing: int) -> bool:
    """Series side of the pairing: the y-adic order-lvl coefficient of the
    traced sum is pivot_pairing / (d * q^lvl), i.e. nonzero mod y."""
    src = mtable.source
    y = src.y
    series_sum = reassemble_modified(mtable, lvl + 1)
    m = series_sum.modulus
    traced = sl_embed(src.p, w, m) * series_sum
    value = _ring_trace(traced)
    if value % y ** lvl != 0:
        return False
    e = (value // y ** lvl) % y
    d = mtable.divisors.get((lvl, 0), 1)
    q_pow = pow(src.q, lvl, y) * d % y
    return (e * q_pow - pivot_pairing) % y == 0


# -- final inequality evaluators -----------------------------------------------------------


@dataclass(frozen=True)
class ClashVerdict:
    p: int
    y: int
    z: int
    level: int
    upper_dominates: bool            # z^2 p sqrt((p-1) y)  <  y^level / 2
    equal: bool

    @property
    def contradiction(self) -> bool:
        """Upper bound below the lower bound: no such value can exist."""
        return self.upper_dominates


def bound_clash(p: int, y: int, z: int, level: int = 4) -> ClashVerdict:
    """Compare z^2 p sqrt((p-1) y) against y^level / 2, exactly.

    Squares both sides: 4 z^4 p^2 (p-1) y  vs  y^(2 level).
    """
    if p < 3 or y < 1 or z == 0 or level < 1:
        raise ValueError("positive sizes expected")
    lhs = 4 * z ** 4 * p ** 2 * (p - 1) * y
    rhs = y ** (2 * level)
    return ClashVerdict(p, y, z, level, lhs < rhs, lhs == rhs)


def displayed_chain_holds(p: int, y: int) -> bool:
    """The closing inequality of the box-bound chain: 2^8 < y^(p - 41 + 1/2).

    Exact form: 2^16 < y^(2p - 81); false whenever the exponent is
    nonpositive (y >= 2 always holds here).
    """
    if y < 2:
        raise ValueError("needs y >= 2")
    e = 2 * p - 81
    if e <= 0:
        return False
    return 2 ** 16 < y ** e


def default_vanishing_order(p: int) -> int:
    """ceil(p^(1/3)) + 2, the vanishing order used by the first variant chain."""
    r = linalg.iroot(p, 3)
    if r ** 3 < p:
        r += 1
    return r + 2


def theorem2_feasible(p: int, n: Optional[int] = None) -> bool:
    """23 n + 41 < 8 p with n the vanishing order (default ceil(p^(1/3)) + 2)."""
    n = default_vanishing_order(p) if n is None else n
    return 23 * n + 41 < 8 * p


def theorem3_feasible(p: int, k: int) -> bool:
    """21 p^2 < (k (p-1))^2, the multi-orbit feasibility condition."""
    return 21 * p * p < (k * (p - 1)) ** 2


def lemma9_size_bound(p: int, q: int) -> bool:
    """(2p)^(q/(p-1)) / p^(1/(p-1)) > 2q, exactly: (2p)^q > p (2q)^(p-1)."""
    return (2 * p) ** q > p * (2 * q) ** (p - 1)


# -- matrix files ---------------------------------------------------------------------------


def write_matrix(path: str, rows: Sequence[Sequence[int]]) -> None:
    with open(path, "w", encoding="ascii") as f:
        f.write(f"{len(rows)} {len(rows[0]) if rows else 0}\n")
        for row in rows:
            f.write(" ".join(str(x) for x in row) + "\n")


def read_matrix(path: str) -> List[List[int]]:
    with open(path, encoding="ascii") as f:
        header = f.readline().split()
        nrows, ncols = int(header[0]), int(header[1])
        rows = []
        for _ in range(nrows):
            row = [int(x) for x in f.readline().split()]
            if len(row) != ncols:
                raise ValueError("matrix row does not match the declared width")
            rows.append(row)
    return rows


def write_witness(path: str, vec: Sequence[int]) -> None:
    with open(path, "w", encoding="ascii") as f:
        f.write(" ".join(str(x) for x in vec) + "\n")


def read_witness(path: str) -> List[int]:
    with open(path, encoding="ascii") as f:
        return [int(x) for x in f.readline().split()]
