"""Exact rational linear algebra on incidence matrices.

Everything here is integer or Fraction arithmetic; there is no floating
point. Elimination is fraction-free (Bareiss), so intermediate entries stay
integers for integer input.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .design import Design, incidence_matrix
from .errors import DegenerateOrder


@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def of(cls, entries):
        if hasattr(entries, "entries"):
            entries = entries.entries
        rows = tuple(tuple(Fraction(x) for x in row) for row in entries)
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        return cls(len(rows), ncols, rows)

    def __matmul__(self, vec):
        return [sum((a * Fraction(x) for a, x in zip(row, vec)), Fraction(0)) for row in self.entries]


@dataclass(frozen=True)
class BoundSolution:
    a: int
    b_val: int
    t: int
    entry_set: frozenset
    flow: object  # FlowAssignment
    scale: int    # factor divided out of X/3 (1 for Steiner systems)


def _integer_rows(m: RationalMatrix):
    """Clear denominators row by row; the row space is unchanged."""
    out = []
    for row in m.entries:
        den = lcm(*(x.denominator for x in row)) if row else 1
        out.append([int(x * den) for x in row])
    return out


def echelon(matrix) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form. Returns (rows, pivot columns)."""
    m = RationalMatrix.of(matrix)
    a = _integer_rows(m)
    nrows, ncols = m.rows, m.cols
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        for i in range(r + 1, nrows):
            f = a[i][c]
            row_i, row_r = a[i], a[r]
            # Bareiss step: the division by the previous pivot is exact
            a[i] = [(p * row_i[j] - f * row_r[j]) // prev for j in range(ncols)]
        prev = p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(matrix) -> int:
    return len(echelon(matrix)[1])


def determinant(matrix) -> int:
    """Bareiss determinant of a square integer matrix."""
    m = RationalMatrix.of(matrix)
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    a = _integer_rows(m)
    n = m.rows
    sign, prev = 1, 1
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        p = a[c][c]
        for i in range(c + 1, n):
            a[i] = [(p * a[i][j] - a[i][c] * a[c][j]) // prev for j in range(n)]
        prev = p
    return sign * a[n - 1][n - 1]


def _primitive(vec):
    den = lcm(*(x.denominator for x in vec))
    ints = [int(x * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    g = g or 1
    lead = next(x for x in ints if x != 0)
    if lead < 0:
        g = -g
    return tuple(x // g for x in ints)


def nullspace_basis(matrix) -> list[tuple[int, ...]]:
    """Basis of the right nullspace, one primitive integer vector per free column."""
    m = RationalMatrix.of(matrix)
    ech, pivots = echelon(m)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    basis = []
    for f in free:
        x = [Fraction(0)] * m.cols
        x[f] = Fraction(1)
        for r in range(len(pivots) - 1, -1, -1):
            pc = pivots[r]
            s = sum((ech[r][j] * x[j] for j in range(pc + 1, m.cols)), Fraction(0))
            x[pc] = -s / ech[r][pc]
        basis.append(_primitive(x))
    return basis


def in_span(vec, basis) -> bool:
    """Whether vec is a rational combination of the basis vectors."""
    if not basis:
        return all(x == 0 for x in vec)
    return rank(list(basis) + [list(vec)]) == rank(list(basis))


def is_symmetric_noflow(design: Design) -> bool:
    """True iff b <= v and the incidence matrix has trivial nullspace.

    By Fisher's inequality b <= v means b == v (a symmetric design) except
    for the one-block design TS(3,1), whose single column is also a
    certificate that no flow exists.
    """
    return design.b <= design.v and not nullspace_basis(incidence_matrix(design))


def bound_flow(design: Design, anchor_block: int = 0) -> BoundSolution:
    """A zero-sum flow with at most five values and O((λv)^2) magnitude.

    Weight points of the anchor block a = 3λ(v-3)/2 and all others
    b = -3λ; every non-anchor block takes the sum of its points' weights and
    the anchor block takes -t, where t is the common value M·Mᵀ·Y produces
    on the anchor points. The vector is divided by 3, and for λ > 1 by the
    factor λ (or λ/2 when v is even) that all entries share.
    """
    from .flows import FlowAssignment

    v, lam = design.v, design.lam
    if design.k != 3:
        raise ValueError("bound_flow applies to triple systems")
    if v <= 4 or v == 7:
        raise DegenerateOrder(f"v={v}: some entries vanish for v <= 4 or v = 7")
    if not 0 <= anchor_block < design.b:
        raise IndexError(f"anchor block {anchor_block} out of range")
    anchor = set(design.blocks[anchor_block])
    a = 3 * lam * (v - 3) // 2
    b_val = -3 * lam
    y = [a if p in anchor else b_val for p in range(v)]

    x = [sum(y[p] for p in blk) for blk in design.blocks]
    x[anchor_block] = 0
    # M·Mᵀ·Y, with M the incidence matrix minus the anchor column
    load = [0] * v
    for j, blk in enumerate(design.blocks):
        if j != anchor_block:
            for p in blk:
                load[p] += x[j]
    ts = {load[p] for p in anchor}
    if len(ts) != 1 or any(load[p] != 0 for p in range(v) if p not in anchor):
        raise ArithmeticError("M·Mᵀ·Y is not a multiple of the anchor column")
    (t,) = ts
    x[anchor_block] = -t

    if any(e % 3 for e in x):
        raise ArithmeticError("entries not divisible by 3")
    # every value is a multiple of λ (odd v) or λ/2 (even v); dividing it
    # out keeps the anchor entry within (λ(v-3)/2)^2 for every λ
    g = lam if v % 2 else lam // 2
    x = [e // (3 * g) for e in x]
    values = {-t, 3 * a, 2 * a + b_val, a + 2 * b_val, 3 * b_val}
    entry_set = frozenset(e // (3 * g) for e in values)
    return BoundSolution(a, b_val, t, entry_set, FlowAssignment(tuple(x)), g)
