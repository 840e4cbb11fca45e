"""Exact integer and rational linear algebra used throughout the package.

Everything here works on plain Python ints / Fractions, so all results are
exact.  Matrices are lists of row lists.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple


def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of a nonnegative integer."""
    if n < 0:
        raise ValueError("iroot needs n >= 0")
    if n == 0:
        return 0
    if k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    x = int(round(n ** (1.0 / k))) + 2
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def is_perfect_power(n: int, k: int) -> Optional[int]:
    """Return r with r**k == n (signs allowed for odd k), else None."""
    if n < 0:
        if k % 2 == 0:
            return None
        r = is_perfect_power(-n, k)
        return None if r is None else -r
    r = iroot(n, k)
    return r if r ** k == n else None


def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> List[List[int]]:
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def mat_mul_vec(a: Sequence[Sequence[int]], v: Sequence[int]) -> List[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def gram_matrix(rows: Sequence[Sequence[int]]) -> List[List[int]]:
    return [[sum(x * y for x, y in zip(r, s)) for s in rows] for r in rows]


def bareiss_det(matrix: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix (fraction-free Bareiss)."""
    m = [list(row) for row in matrix]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rank_rational(rows: Iterable[Sequence]) -> int:
    """Rank over Q of a list of integer/Fraction rows."""
    space = RowSpace()
    for row in rows:
        space.add(row)
    return space.rank


class RowSpace:
    """Incremental row space over Q with exact membership tests."""

    def __init__(self) -> None:
        self._echelon: List[List[Fraction]] = []
        self._pivots: List[int] = []

    @property
    def rank(self) -> int:
        return len(self._echelon)

    def _reduce(self, row: Sequence) -> List[Fraction]:
        v = [Fraction(x) for x in row]
        for piv, erow in zip(self._pivots, self._echelon):
            if v[piv]:
                c = v[piv]
                v = [a - c * b for a, b in zip(v, erow)]
        return v

    def contains(self, row: Sequence) -> bool:
        return not any(self._reduce(row))

    def add(self, row: Sequence) -> bool:
        """Add a row; return True if it enlarged the space."""
        v = self._reduce(row)
        for idx, x in enumerate(v):
            if x:
                inv = Fraction(1) / x
                self._echelon.append([a * inv for a in v])
                self._pivots.append(idx)
                return True
        return False


def _ext_gcd(a: int, b: int) -> Tuple[int, int, int]:
    """(g, u, v) with u a + v b = g = gcd(a, b)."""
    old_r, r = a, b
    old_u, u = 1, 0
    old_v, v = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_u, u = u, old_u - q * u
        old_v, v = v, old_v - q * v
    if old_r < 0:
        old_r, old_u, old_v = -old_r, -old_u, -old_v
    return old_r, old_u, old_v


def hermite_normal_form(rows: Sequence[Sequence[int]], ncols: Optional[int] = None,
                        det_multiple: Optional[int] = None) -> List[List[int]]:
    """Row-style HNF of the lattice spanned by integer rows.

    Streaming insertion: each row is reduced against the current pivot rows,
    combining through extended gcd (a unimodular 2x2 step).  Pivots end up
    positive with the entries above them reduced into [0, pivot).

    det_multiple: a positive integer D with D*Z^ncols contained in the
    lattice (e.g. the norm of an ideal).  Entries are then kept reduced
    mod D, which prevents coefficient blowup on large inputs.
    """
    if ncols is None:
        ncols = len(rows[0])
    pivots: Dict[int, List[int]] = {}
    if det_multiple is not None:
        if det_multiple <= 0:
            raise ValueError("det_multiple must be positive")
        for j in range(ncols):
            pivots[j] = [det_multiple if i == j else 0 for i in range(ncols)]

    def clip(vec: List[int]) -> List[int]:
        if det_multiple is None:
            return vec
        return [x % det_multiple for x in vec]

    for r in rows:
        row = clip(list(r))
        col = 0
        while col < ncols:
            if row[col] == 0:
                col += 1
                continue
            piv = pivots.get(col)
            if piv is None:
                if row[col] < 0:
                    row = [-x for x in row]
                pivots[col] = row
                break
            a, b = piv[col], row[col]
            if b % a == 0:
                q = b // a
                row = clip([x - q * y for x, y in zip(row, piv)])
            else:
                g, u, v = _ext_gcd(a, b)
                qa, qb = a // g, b // g
                new_piv = [u * x + v * y for x, y in zip(piv, row)]
                new_piv[col] = g
                pivots[col] = [g if j == col else new_piv[j] % det_multiple
                               if det_multiple is not None else new_piv[j]
                               for j in range(ncols)]
                row = clip([qa * y - qb * x for x, y in zip(piv, row)])
            col += 1
    basis = [pivots[c] for c in sorted(pivots)]
    # Reduce entries above pivots: for each row, sweep the pivot rows below
    # it in increasing order, so re-polluted later columns get fixed by the
    # subsequent sweeps.
    pivot_cols = [next(j for j, x in enumerate(row) if x != 0) for row in basis]
    for k in range(len(basis)):
        for i in range(k + 1, len(basis)):
            piv = basis[i][pivot_cols[i]]
            q = basis[k][pivot_cols[i]] // piv
            if q:
                basis[k] = [a - q * b for a, b in zip(basis[k], basis[i])]
    return basis


def hnf_contains(hnf: Sequence[Sequence[int]], vec: Sequence[int]) -> bool:
    """Whether an integer vector lies in the lattice spanned by HNF rows."""
    v = list(vec)
    for row in hnf:
        piv_col = next((j for j, x in enumerate(row) if x != 0), None)
        if piv_col is None:
            continue
        if v[piv_col] % row[piv_col] != 0:
            return False
        q = v[piv_col] // row[piv_col]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return not any(v)


def integer_kernel(a: Sequence[Sequence[int]], ncols: int) -> List[List[int]]:
    """Basis of the saturated lattice {w in Z^ncols : A w = 0}.

    Row-reduces [A^T | I] with unimodular operations; rows whose A^T part
    vanishes give the kernel.
    """
    nrows = len(a)
    at = [[a[i][j] for i in range(nrows)] + [1 if k == j else 0 for k in range(ncols)]
          for j in range(ncols)]
    lead = 0
    for col in range(nrows):
        piv = None
        while True:
            candidates = [i for i in range(lead, ncols) if at[i][col] != 0]
            if not candidates:
                break
            candidates.sort(key=lambda i: abs(at[i][col]))
            piv = candidates[0]
            at[lead], at[piv] = at[piv], at[lead]
            done = True
            for i in range(lead + 1, ncols):
                if at[i][col] != 0:
                    q = at[i][col] // at[lead][col]
                    at[i] = [x - q * y for x, y in zip(at[i], at[lead])]
                    if at[i][col] != 0:
                        done = False
            if done:
                break
        if any(at[i][col] != 0 for i in range(lead, ncols)):
            lead += 1
    kernel = [row[nrows:] for row in at[lead:] if not any(row[:nrows])]
    return [k for k in kernel if any(k)]


def _gso(basis: List[List[Fraction]]) -> Tuple[List[List[Fraction]], List[List[Fraction]], List[Fraction]]:
    n = len(basis)
    ortho: List[List[Fraction]] = []
    mu: List[List[Fraction]] = [[Fraction(0)] * n for _ in range(n)]
    norms: List[Fraction] = []
    for i in range(n):
        v = list(basis[i])
        for j in range(i):
            if norms[j] == 0:
                mu[i][j] = Fraction(0)
                continue
            mu[i][j] = sum(a * b for a, b in zip(basis[i], ortho[j])) / norms[j]
            v = [a - mu[i][j] * b for a, b in zip(v, ortho[j])]
        ortho.append(v)
        norms.append(sum(a * a for a in v))
    return ortho, mu, norms


def lll_reduce(rows: Sequence[Sequence[int]], delta: Fraction = Fraction(3, 4)) -> List[List[int]]:
    """LLL reduction with exact rational Gram-Schmidt data."""
    basis = [[Fraction(x) for x in row] for row in rows]
    n = len(basis)
    if n <= 1:
        return [[int(x) for x in row] for row in basis]
    ortho, mu, norms = _gso(basis)
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = mu[k][j]
            r = int(q) if q == int(q) else round(q)
            if r:
                basis[k] = [a - r * b for a, b in zip(basis[k], basis[j])]
                ortho, mu, norms = _gso(basis)
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            basis[k], basis[k - 1] = basis[k - 1], basis[k]
            ortho, mu, norms = _gso(basis)
            k = max(k - 1, 1)
    return [[int(x) for x in row] for row in basis]


def enumerate_short_vectors(basis: Sequence[Sequence[int]], radius_sq: Fraction):
    """Yield nonzero lattice vectors with squared Euclidean norm <= radius_sq.

    Standard Fincke-Pohst enumeration on an (LLL-reduced) basis, exact
    rational arithmetic.  One vector per +/- pair.
    """
    n = len(basis)
    if n == 0:
        return
    _, mu, norms = _gso([[Fraction(x) for x in row] for row in basis])
    if any(nm == 0 for nm in norms):
        raise ValueError("basis must be linearly independent")
    coeffs = [0] * n
    centers = [Fraction(0)] * n
    partial = [Fraction(0)] * (n + 1)

    def recurse(level: int):
        if level < 0:
            if any(coeffs):
                vec = [0] * len(basis[0])
                for c, row in zip(coeffs, basis):
                    if c:
                        vec = [a + c * b for a, b in zip(vec, row)]
                yield list(vec)
            return
        center = -sum(mu[i][level] * coeffs[i] for i in range(level + 1, n))
        budget = radius_sq - partial[level + 1]
        if budget < 0:
            return
        # |x - center|^2 * norms[level] <= budget
        bound = (budget / norms[level]) if norms[level] else Fraction(0)
        lo = center - _frac_sqrt_upper(bound)
        hi = center + _frac_sqrt_upper(bound)
        x = math.ceil(lo)
        while Fraction(x) <= hi:
            coeffs[level] = x
            partial[level] = partial[level + 1] + (Fraction(x) - center) ** 2 * norms[level]
            if partial[level] <= radius_sq:
                yield from recurse(level - 1)
            x += 1
        coeffs[level] = 0
        partial[level] = Fraction(0)

    yield from recurse(n - 1)


def _frac_sqrt_upper(x: Fraction) -> Fraction:
    """A rational upper bound for sqrt(x), x >= 0."""
    if x < 0:
        return Fraction(0)
    num, den = x.numerator, x.denominator
    r = math.isqrt(num * den) + 1
    return Fraction(r, den)


def sup_norm(vec: Sequence[int]) -> int:
    return max(abs(x) for x in vec) if vec else 0
