"""Idempotent Latin squares with orthogonal mates, and their transversals.

Supported orders: every odd n, powers of two from 4, products of those
(n divisible by 4), and n = 10 via a seeded randomized search. Order 6 has
no orthogonal pair; other orders that are 2 mod 4 raise Unsupported.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache

from ._budget import Budget
from ._xcover import exact_cover
from .errors import SearchTimeout, Unsupported

# irreducible polynomials over GF(2), by degree
_GF2_POLY = {1: 0b11, 2: 0b111, 3: 0b1011, 4: 0b10011, 5: 0b100101, 6: 0b1000011}


@dataclass(frozen=True)
class LatinSquare:
    n: int
    grid: tuple[tuple[int, ...], ...]

    def __call__(self, i, j):
        return self.grid[i][j]

    def is_latin(self) -> bool:
        want = set(range(self.n))
        rows_ok = all(set(row) == want for row in self.grid)
        cols_ok = all({row[j] for row in self.grid} == want for j in range(self.n))
        return len(self.grid) == self.n and rows_ok and cols_ok

    def is_idempotent(self) -> bool:
        return all(self.grid[i][i] == i for i in range(self.n))


@dataclass(frozen=True)
class OrthogonalPair:
    first: LatinSquare
    second: LatinSquare


@dataclass(frozen=True)
class TransversalSet:
    transversals: tuple[tuple[tuple[int, int], ...], ...]


def square(grid) -> LatinSquare:
    grid = tuple(tuple(int(x) for x in row) for row in grid)
    return LatinSquare(len(grid), grid)


def verify_orthogonal(pair: OrthogonalPair) -> bool:
    n = pair.first.n
    if pair.second.n != n:
        return False
    seen = {(pair.first(i, j), pair.second(i, j)) for i in range(n) for j in range(n)}
    return len(seen) == n * n


def is_transversal(sq: LatinSquare, cells) -> bool:
    cells = list(cells)
    n = sq.n
    return (
        len(cells) == n
        and len({r for r, _ in cells}) == n
        and len({c for _, c in cells}) == n
        and len({sq(r, c) for r, c in cells}) == n
    )


# -- constructions -----------------------------------------------------------


def _odd_pair(n):
    # first = (i + j)/2 is idempotent; the mate i - j is constant on the diagonal
    half = (n + 1) // 2
    first = [[(half * (i + j)) % n for j in range(n)] for i in range(n)]
    second = [[(i - j) % n for j in range(n)] for i in range(n)]
    return first, second


def _gf2_mul(x, y, m):
    poly = _GF2_POLY[m]
    out = 0
    while y:
        if y & 1:
            out ^= x
        y >>= 1
        x <<= 1
        if x >> m:
            x ^= poly
    return out


def _gf2_pair(m):
    # first = a*x + (1+a)*y with a outside {0, 1}; mate x + y
    n = 1 << m
    a = 2
    first = [[_gf2_mul(a, x, m) ^ _gf2_mul(a ^ 1, y, m) for y in range(n)] for x in range(n)]
    second = [[x ^ y for y in range(n)] for x in range(n)]
    return first, second


def _kronecker(p, q):
    (f1, s1), (f2, s2) = p, q
    n1, n2 = len(f1), len(f2)
    n = n1 * n2

    def prod(a, b):
        return [
            [a[i // n2][j // n2] * n2 + b[i % n2][j % n2] for j in range(n)]
            for i in range(n)
        ]

    return prod(f1, f2), prod(s1, s2)


def random_latin_square(n: int, rng: random.Random, budget=None):
    """A Latin square of order n found by randomized exact cover."""
    rows = {
        (r, c, s): [("rc", r, c), ("rs", r, s), ("cs", c, s)]
        for r in range(n) for c in range(n) for s in range(n)
    }
    sol = next(exact_cover(rows, budget, rng=rng))
    grid = [[0] * n for _ in range(n)]
    for r, c, s in sol:
        grid[r][c] = s
    return grid


def all_transversals(grid, limit=None):
    """Every transversal as a tuple mapping row -> column."""
    n = len(grid)
    out = []

    def rec(r, used_c, used_s, cols):
        if limit is not None and len(out) >= limit:
            return
        if r == n:
            out.append(tuple(cols))
            return
        for c in range(n):
            s = grid[r][c]
            if not (used_c >> c) & 1 and not (used_s >> s) & 1:
                cols.append(c)
                rec(r + 1, used_c | 1 << c, used_s | 1 << s, cols)
                cols.pop()

    rec(0, 0, 0, [])
    return out


def find_mate(grid, budget=None):
    """An orthogonal mate of ``grid`` from a disjoint cover by transversals, or None."""
    n = len(grid)
    trans = all_transversals(grid)
    rows = {i: [(r, c) for r, c in enumerate(t)] for i, t in enumerate(trans)}
    cover = next(exact_cover(rows, budget), None)
    if cover is None:
        return None
    mate = [[0] * n for _ in range(n)]
    for sym, i in enumerate(sorted(cover, key=lambda i: trans[i])):
        for r, c in enumerate(trans[i]):
            mate[r][c] = sym
    return mate


def _normalise(first, second):
    """Move the mate's symbol-0 cells onto the diagonal and make first idempotent."""
    n = len(first)
    col_of = [next(c for c in range(n) if second[r][c] == 0) for r in range(n)]
    f = [[first[r][col_of[c]] for c in range(n)] for r in range(n)]
    s = [[second[r][col_of[c]] for c in range(n)] for r in range(n)]
    relabel = {f[i][i]: i for i in range(n)}
    f = [[relabel[x] for x in row] for row in f]
    return f, s


def _searched_pair(n, seed, restarts, seconds):
    rng = random.Random(seed)
    for _ in range(restarts):
        grid = random_latin_square(n, rng, Budget(seconds=seconds))
        try:
            mate = find_mate(grid, Budget(seconds=seconds))
        except SearchTimeout:
            continue
        if mate is not None:
            return _normalise(grid, mate)
    return None


@lru_cache(maxsize=None)
def _pair_grids(n, seed):
    if n % 2:
        return _odd_pair(n)
    twos = (n & -n).bit_length() - 1
    odd = n >> twos
    if twos >= 2 and twos in _GF2_POLY:
        p = _gf2_pair(twos)
        return p if odd == 1 else _kronecker(p, _odd_pair(odd))
    if twos == 1 and n == 10:
        found = _searched_pair(n, seed, restarts=20, seconds=10)
        if found is not None:
            return found
    raise Unsupported(f"no idempotent Latin square with a mate implemented for order {n}")


def orthogonal_idempotent_pair(n: int, seed: int = 0) -> OrthogonalPair:
    """An idempotent Latin square and an orthogonal mate constant on the diagonal."""
    if n < 3 or n == 6:
        raise Unsupported(f"order {n} has no idempotent square with an orthogonal mate")
    first, second = _pair_grids(n, seed)
    return OrthogonalPair(square(first), square(second))


def transversals_from_mate(pair: OrthogonalPair) -> TransversalSet:
    """T_i = cells where the mate shows symbol i; the diagonal class, if any, goes last."""
    n = pair.first.n
    classes = [[] for _ in range(n)]
    for i, j in itertools.product(range(n), repeat=2):
        classes[pair.second(i, j)].append((i, j))
    diag = [k for k, cells in enumerate(classes) if all(i == j for i, j in cells)]
    if diag:
        d = diag[0]
        classes = classes[:d] + classes[d + 1:] + [classes[d]]
    return TransversalSet(tuple(tuple(c) for c in classes))
