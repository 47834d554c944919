"""Block designs and triple systems.

Points are the integers ``0..v-1``. Blocks are stored as sorted tuples and a
design keeps its blocks in lexicographic order, so any certificate that
refers to blocks by index is stable across runs. Repeated blocks are legal
(λ > 1) and stay distinct entries.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from math import gcd

from ._budget import Budget
from ._xcover import exact_cover
from .errors import (
    InvalidStructure,
    MalformedBlock,
    NotADesign,
    PairCoverageError,
    SearchTimeout,
)

Block = tuple[int, ...]


@dataclass(frozen=True)
class Design:
    v: int
    lam: int
    k: int
    blocks: tuple[Block, ...]

    @property
    def b(self) -> int:
        return len(self.blocks)

    @property
    def r(self) -> int:
        return self.lam * (self.v - 1) // (self.k - 1)

    def blocks_through(self, point: int) -> list[int]:
        return [j for j, blk in enumerate(self.blocks) if point in blk]


@dataclass(frozen=True)
class IncidenceMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def row_sums(self):
        return [sum(row) for row in self.entries]

    def col_sums(self):
        return [sum(row[j] for row in self.entries) for j in range(self.cols)]


@dataclass(frozen=True)
class StarterSet:
    v: int
    lam: int
    starters: tuple[Block, ...]
    orbit_lengths: tuple[int, ...]

    @property
    def full_orbits(self) -> bool:
        return all(n == self.v for n in self.orbit_lengths)


@dataclass(frozen=True)
class Resolution:
    alpha: int
    classes: tuple[tuple[int, ...], ...]

    @property
    def rho(self) -> int:
        return len(self.classes)


@dataclass(frozen=True)
class HananiStructure:
    u: int
    design: Design
    partial_class: tuple[int, ...]
    almost_classes: tuple[tuple[int, ...], ...]
    missing_point: tuple[int, ...]


# -- construction and validation ---------------------------------------------


def _check_blocks(v, k, blocks):
    out = []
    for blk in blocks:
        pts = tuple(sorted(int(p) for p in blk))
        if len(pts) != k:
            raise MalformedBlock(f"block {tuple(blk)} has size {len(pts)}, expected {k}")
        if len(set(pts)) != k:
            raise MalformedBlock(f"block {tuple(blk)} repeats a point")
        if pts[0] < 0 or pts[-1] >= v:
            raise MalformedBlock(f"block {tuple(blk)} has a point outside 0..{v - 1}")
        out.append(pts)
    return out


def pair_counts(v, blocks) -> Counter:
    counts = Counter()
    for blk in blocks:
        for p, q in itertools.combinations(blk, 2):
            counts[(p, q)] += 1
    return counts


def _check_coverage(v, lam, blocks):
    counts = pair_counts(v, blocks)
    for pair in itertools.combinations(range(v), 2):
        if counts[pair] != lam:
            raise PairCoverageError(pair, counts[pair], lam)


def make_design_ordered(v, lam, k, blocks):
    """Validate and canonicalise; also return the sorting permutation.

    ``design.blocks[i] == sorted(blocks[order[i]])``, which lets callers carry
    block-aligned data (weights, class labels) into canonical order.
    """
    if v < k or k < 2 or lam < 1:
        raise ValueError(f"need v >= k >= 2 and lambda >= 1, got v={v} k={k} lambda={lam}")
    blocks = list(blocks)
    if not blocks:
        raise ValueError("a design needs at least one block")
    norm = _check_blocks(v, k, blocks)
    _check_coverage(v, lam, norm)
    order = sorted(range(len(norm)), key=lambda i: norm[i])
    return Design(v, lam, k, tuple(norm[i] for i in order)), order


def make_design(v: int, lam: int, k: int, blocks) -> Design:
    return make_design_ordered(v, lam, k, blocks)[0]


def check_admissible(v: int, lam: int) -> bool:
    """Whether a TS(v, lam) exists (Hanani's conditions)."""
    if v < 3 or lam < 1:
        return False
    return lam % gcd(v - 2, 6) == 0


def incidence_matrix(design: Design) -> IncidenceMatrix:
    rows = tuple(
        tuple(1 if p in blk else 0 for blk in design.blocks) for p in range(design.v)
    )
    return IncidenceMatrix(design.v, design.b, rows)


def remap_indices(order):
    """Inverse of a canonicalising permutation: old index -> new index."""
    pos = [0] * len(order)
    for new, old in enumerate(order):
        pos[old] = new
    return pos


# -- cyclic development ------------------------------------------------------


def orbit_length(block, v) -> int:
    s = frozenset(block)
    for t in range(1, v + 1):
        if v % t == 0 and frozenset((x + t) % v for x in s) == s:
            return t
    return v


def develop_cyclic(starters: StarterSet):
    """Develop starter blocks mod v.

    Returns the design and, for each block in canonical order, the index of
    the starter whose orbit it belongs to.
    """
    v = starters.v
    blocks, tags = [], []
    for idx, st in enumerate(starters.starters):
        length = orbit_length(st, v)
        if idx < len(starters.orbit_lengths) and starters.orbit_lengths[idx] != length:
            raise NotADesign(
                f"starter {st} has orbit length {length}, declared {starters.orbit_lengths[idx]}"
            )
        for t in range(length):
            blocks.append(tuple(sorted((x + t) % v for x in st)))
            tags.append(idx)
    try:
        design, order = make_design_ordered(v, starters.lam, len(starters.starters[0]), blocks)
    except PairCoverageError as exc:
        raise NotADesign(f"developed blocks are not a TS({v},{starters.lam}): {exc}") from exc
    return design, tuple(tags[i] for i in order)


def _difference_need(v, lam):
    need = {}
    for d in range(1, v // 2 + 1):
        if 2 * d == v:
            if lam % 2:
                return None
            need[d] = lam // 2
        else:
            need[d] = lam
    return need


def find_cyclic_starters(v: int, lam: int, require_full_orbits: bool = True, budget=None):
    """Search for triple starters over Z_v whose development is a TS(v, lam).

    Works over gap triples (a, b, c) with a + b + c = v; the starter is
    {0, a, a+b}. Returns a StarterSet, or None once the space is exhausted.
    """
    need = _difference_need(v, lam)
    if need is None or v < 3:
        return None
    starters = _starter_search(v, need, require_full_orbits, Budget.coerce(budget))
    if starters is None:
        return None
    lengths = tuple(orbit_length(s, v) for s in starters)
    return StarterSet(v, lam, tuple(starters), lengths)


def _starter_search(v, need, require_full_orbits, budget):
    """Gap triples over Z_v whose differences meet ``need`` exactly, or None."""
    need = dict(need)
    triples = []
    for a in range(1, v // 3 + 1):
        for b in range(a, (v - a) // 2 + 1):
            c = v - a - b
            if c < b:
                continue
            if a == b == c:
                if require_full_orbits:
                    continue
                contrib = Counter({min(a, v - a): 1})
            else:
                contrib = Counter(min(g, v - g) for g in (a, b, c))
            triples.append(((a, b, c), contrib))
    by_diff = {d: [i for i, (_, c) in enumerate(triples) if d in c] for d in need}
    chosen = []

    def rec(prev_pivot, min_idx):
        budget.tick()
        live = [d for d, n in need.items() if n > 0]
        if not live:
            return True
        pivot = max(live)
        start = min_idx if pivot == prev_pivot else 0
        for i in by_diff[pivot]:
            if i < start:
                continue
            contrib = triples[i][1]
            if any(need[d] < n for d, n in contrib.items()):
                continue
            for d, n in contrib.items():
                need[d] -= n
            chosen.append(i)
            if rec(pivot, i):
                return True
            chosen.pop()
            for d, n in contrib.items():
                need[d] += n
        return False

    if not rec(None, 0):
        return None
    starters = []
    for i in chosen:
        a, b, _ = triples[i][0]
        starters.append((0, a, a + b))
    return starters


def find_rotational_starters(v: int, lam: int, budget=None):
    """Base blocks on Z_{v-1} plus a fixed point v-1, developed mod v-1.

    Needs v even and lam even: lam/2 orbits of {inf, 0, d} carry the fixed
    point and plain triples cover the remaining differences. Every orbit is
    full. Returns a StarterSet over v (with the fixed point as v-1) or None.
    """
    n = v - 1
    if v % 2 or lam % 2 or n < 3:
        return None
    need = _difference_need(n, lam)
    half = (n - 1) // 2
    inf_blocks = []
    for i in range(lam // 2):
        d = i % half + 1
        need[d] -= 1
        inf_blocks.append((0, d, n))
    if sum(need.values()) % 3:
        return None
    plain = _starter_search(n, need, True, Budget.coerce(budget))
    if plain is None:
        return None
    starters = tuple(plain) + tuple(inf_blocks)
    return StarterSet(v, lam, starters, (n,) * len(starters))


def develop_rotational(starters: StarterSet):
    """Develop base blocks mod v-1, fixing v-1. Returns (design, orbit tags)."""
    v = starters.v
    n, inf = v - 1, v - 1
    blocks, tags = [], []
    for idx, st in enumerate(starters.starters):
        for t in range(n):
            blocks.append(tuple(sorted(x if x == inf else (x + t) % n for x in st)))
            tags.append(idx)
    try:
        design, order = make_design_ordered(v, starters.lam, 3, blocks)
    except PairCoverageError as exc:
        raise NotADesign(f"developed blocks are not a TS({v},{starters.lam}): {exc}") from exc
    return design, tuple(tags[i] for i in order)


# -- resolutions -------------------------------------------------------------


def check_resolution(design: Design, res: Resolution) -> list[str]:
    problems = []
    seen = Counter(j for cls in res.classes for j in cls)
    for j in range(design.b):
        if seen[j] != 1:
            problems.append(f"block {j} appears {seen[j]} times across classes")
    for j in seen:
        if not 0 <= j < design.b:
            problems.append(f"block index {j} out of range")
    for ci, cls in enumerate(res.classes):
        cnt = Counter(p for j in cls if 0 <= j < design.b for p in design.blocks[j])
        for p in range(design.v):
            if cnt[p] != res.alpha:
                problems.append(f"class {ci} contains point {p} {cnt[p]} times, expected {res.alpha}")
                break
    return problems


def find_resolution(design: Design, alpha: int = 1, budget=None):
    """Exact-cover search for a partition into alpha-resolution classes.

    Each class is grown from the lowest unassigned block; inside a class the
    search branches on the point with the fewest candidate blocks and picks
    all of that point's remaining occurrences at once, so no class is
    enumerated twice. Returns None when the space is exhausted.
    """
    budget = Budget.coerce(budget)
    v, k = design.v, design.k
    if design.r % alpha or (v * alpha) % k:
        return None
    size = v * alpha // k
    through = [design.blocks_through(p) for p in range(v)]
    unassigned = set(range(design.b))
    classes: list[list[int]] = []

    def rec():
        if not unassigned:
            return True
        first = min(unassigned)
        cls = [first]
        deficit = [alpha] * v
        for q in design.blocks[first]:
            deficit[q] -= 1
        for found in _classes_from(cls, deficit):
            for j in found:
                unassigned.discard(j)
            classes.append(list(found))
            if rec():
                return True
            classes.pop()
            unassigned.update(found)
        return False

    def _classes_from(cls, deficit):
        # generator over every completion of a partial class
        budget.tick()
        if len(cls) == size:
            if all(d == 0 for d in deficit):
                yield tuple(cls)
            return
        best, best_cands = None, None
        for p in range(v):
            if deficit[p] == 0:
                continue
            cands = [
                j for j in through[p]
                if j in unassigned and j not in cls
                and all(deficit[q] > 0 for q in design.blocks[j])
            ]
            if len(cands) < deficit[p]:
                return
            if best is None or len(cands) < len(best_cands):
                best, best_cands = p, cands
        if best is None:
            return
        for combo in itertools.combinations(best_cands, deficit[best]):
            new_def = list(deficit)
            if any(_dec(new_def, design.blocks[j]) for j in combo):
                continue
            yield from _classes_from(cls + list(combo), new_def)

    if not rec():
        return None
    return Resolution(alpha, tuple(tuple(sorted(c)) for c in classes))


def _dec(deficit, blk):
    bad = False
    for q in blk:
        deficit[q] -= 1
        if deficit[q] < 0:
            bad = True
    return bad


def rotational_resolvable_ts2(v: int, budget=None):
    """Resolvable TS(v, 2) on Z_{v-1} plus a fixed point, for v = 0 mod 3, v >= 9.

    A base parallel class {inf, 0, s} + (v/3 - 1) triples is developed mod
    v-1; each translate of the base class is a parallel class. Returns
    (design, resolution) or None if no base class exists.
    """
    if v % 3 or v < 9:
        return None
    budget = Budget.coerce(budget)
    m = v - 1
    inf = m

    def dmin(x):
        x %= m
        return min(x, m - x)

    base_need = {}
    for d in range(1, m // 2 + 1):
        base_need[d] = 1 if 2 * d == m else 2

    def search(s):
        need = dict(base_need)
        need[dmin(s)] -= 1
        used = {0, s}
        triples = []

        def rec():
            budget.tick()
            live = [d for d, n in need.items() if n > 0]
            if not live:
                return True
            # place the largest outstanding difference first
            d = max(live)
            for x in range(m):
                y = (x + d) % m
                if x in used or y in used:
                    continue
                for z in range(m):
                    if z in used or z == x or z == y:
                        continue
                    c = Counter((d, dmin(z - x), dmin(z - y)))
                    if any(need[e] < n for e, n in c.items()):
                        continue
                    for e, n in c.items():
                        need[e] -= n
                    used.update((x, y, z))
                    triples.append((x, y, z))
                    if rec():
                        return True
                    triples.pop()
                    used.difference_update((x, y, z))
                    for e, n in c.items():
                        need[e] += n
            return False

        return triples if rec() else None

    for s in range(1, m // 2 + 1):
        if m % 2 == 0 and sum(d * n for d, n in base_need.items()) % 2 != dmin(s) % 2:
            # every triple's differences sum to an even number when m is even
            continue
        found = search(s)
        if found is None:
            continue
        base = [(0, s, inf)] + found
        blocks, tags = [], []
        for t in range(m):
            for blk in base:
                blocks.append(tuple(x if x == inf else (x + t) % m for x in blk))
                tags.append(t)
        design, order = make_design_ordered(v, 2, 3, blocks)
        classes = [[] for _ in range(m)]
        for new, old in enumerate(order):
            classes[tags[old]].append(new)
        return design, Resolution(1, tuple(tuple(c) for c in classes))
    return None


# -- Hanani triple systems ---------------------------------------------------


def check_hanani(h: HananiStructure) -> list[str]:
    d, u = h.design, h.u
    problems = []
    if d.v != 6 * u + 1 or d.lam != 1 or d.k != 3:
        problems.append(f"design must be an STS({6 * u + 1})")
        return problems
    if len(h.partial_class) != u:
        problems.append(f"partial class has {len(h.partial_class)} blocks, expected {u}")
    if len(h.almost_classes) != 3 * u or len(h.missing_point) != 3 * u:
        problems.append(f"expected {3 * u} almost-parallel classes with missing points")
        return problems
    p0_points = Counter(p for j in h.partial_class for p in d.blocks[j])
    if any(c != 1 for c in p0_points.values()):
        problems.append("partial class blocks are not disjoint")
    if set(p0_points) != set(h.missing_point):
        problems.append("partial class does not cover exactly the missing points")
    for i, (cls, x) in enumerate(zip(h.almost_classes, h.missing_point)):
        if len(cls) != 2 * u:
            problems.append(f"class {i} has {len(cls)} blocks, expected {2 * u}")
        cnt = Counter(p for j in cls for p in d.blocks[j])
        for p in range(d.v):
            want = 0 if p == x else 1
            if cnt[p] != want:
                problems.append(f"class {i} covers point {p} {cnt[p]} times, expected {want}")
                break
    used = Counter(list(h.partial_class) + [j for c in h.almost_classes for j in c])
    if sorted(used) != list(range(d.b)) or any(c != 1 for c in used.values()):
        problems.append("classes do not partition the blocks")
    return problems


def validate_hanani(h: HananiStructure) -> HananiStructure:
    problems = check_hanani(h)
    if problems:
        raise InvalidStructure("; ".join(problems))
    return h


def _disjoint_sets(blocks, size, start=0, used=frozenset()):
    if size == 0:
        yield ()
        return
    for j in range(start, len(blocks)):
        if used.isdisjoint(blocks[j]):
            for rest in _disjoint_sets(blocks, size - 1, j + 1, used | set(blocks[j])):
                yield (j,) + rest


def find_hanani(design: Design, budget=None, max_partial_classes: int = 50):
    """Search an STS(6u+1) for a Hanani structure.

    For each candidate partial class (u disjoint blocks, lexicographic), the
    remaining blocks are assigned to the 3u almost-parallel classes by exact
    cover: every block used once, every class covering each point except its
    missing point once. Returns a HananiStructure or None.
    """
    budget = Budget.coerce(budget)
    v = design.v
    if design.lam != 1 or design.k != 3 or (v - 1) % 6 or v < 7:
        return None
    u = (v - 1) // 6
    for tried, p0 in enumerate(_disjoint_sets(design.blocks, u)):
        if tried >= max_partial_classes:
            break
        missing = sorted(p for j in p0 for p in design.blocks[j])
        rest = [j for j in range(design.b) if j not in p0]
        rows = {}
        for j in rest:
            blk = design.blocks[j]
            for c, x in enumerate(missing):
                if x not in blk:
                    rows[(j, c)] = [("block", j)] + [("cell", c, p) for p in blk]
        for cover in exact_cover(rows, budget):
            classes = [[] for _ in missing]
            for j, c in cover:
                classes[c].append(j)
            h = HananiStructure(
                u, design, tuple(p0),
                tuple(tuple(sorted(c)) for c in classes), tuple(missing),
            )
            return validate_hanani(h)
    return None


def construct_hanani(u: int, seed: int = 0, restart_seconds: float = 5.0, max_restarts: int = 40):
    """Build a Hanani triple system of order 6u+1 with a Z_3 automorphism.

    Points are 3*o + e for orbit o < 2u and e in Z_3, plus a fixed point
    v-1. The partial class is the u orbits {3o, 3o+1, 3o+2}, o < u. One base
    almost-parallel class per orbit of missing points is found by exact
    cover over pair-orbits; rotating it gives the other two. Each restart
    shuffles the branching order and gets ``restart_seconds``. Returns a
    validated HananiStructure or None when every restart times out.
    """
    import random

    if u < 1:
        raise ValueError("u must be positive")
    v = 6 * u + 1
    inf = v - 1

    def rot(p, e=1):
        return p if p == inf else 3 * (p // 3) + (p + e) % 3

    def pair_orbit(p, q):
        return min(tuple(sorted((rot(p, e), rot(q, e)))) for e in range(3))

    p0 = [(3 * o, 3 * o + 1, 3 * o + 2) for o in range(u)]
    p0_pairs = {pair_orbit(a, b) for blk in p0 for a, b in itertools.combinations(blk, 2)}
    rows = {}
    for c in range(u):
        pts = [p for p in range(v) if p != 3 * c]
        for t in itertools.combinations(pts, 3):
            if t[2] != inf and t[0] // 3 == t[2] // 3:
                continue
            prs = [pair_orbit(a, b) for a, b in itertools.combinations(t, 2)]
            if len(set(prs)) < 3 or any(pp in p0_pairs for pp in prs):
                continue
            rows[(c, t)] = [("pt", c, p) for p in t] + [("pair",) + pp for pp in prs]

    rng = random.Random(seed)
    for _ in range(max_restarts):
        try:
            cover = next(exact_cover(rows, Budget(seconds=restart_seconds), rng=rng), None)
        except SearchTimeout:
            continue
        if cover is None:
            return None
        classes = {}
        for c, t in cover:
            for e in range(3):
                blk = tuple(sorted(rot(p, e) for p in t))
                classes.setdefault(3 * c + e, []).append(blk)
        blocks = list(p0) + [b for x in sorted(classes) for b in classes[x]]
        design, order = make_design_ordered(v, 1, 3, blocks)
        where = {old: new for new, old in enumerate(order)}
        idx = iter(range(len(blocks)))
        partial = tuple(sorted(where[next(idx)] for _ in p0))
        almost = tuple(
            tuple(sorted(where[next(idx)] for _ in classes[x])) for x in sorted(classes)
        )
        return validate_hanani(HananiStructure(u, design, partial, almost, tuple(sorted(classes))))
    return None


# -- named systems and Pasch trades -----------------------------------------


def affine_sts9() -> Design:
    """The unique STS(9): lines of the affine plane over Z_3."""
    blocks = set()
    pts = [(x, y) for x in range(3) for y in range(3)]
    for p in pts:
        for d in [(0, 1), (1, 0), (1, 1), (1, 2)]:
            line = tuple(sorted(3 * ((p[0] + t * d[0]) % 3) + (p[1] + t * d[1]) % 3 for t in range(3)))
            blocks.add(line)
    return make_design(9, 1, 3, blocks)


def projective_sts15() -> Design:
    """PG(3,2): points are nonzero vectors of GF(2)^4, lines {a, b, a^b}."""
    blocks = {tuple(sorted((a - 1, b - 1, (a ^ b) - 1)))
              for a in range(1, 16) for b in range(a + 1, 16)}
    return make_design(15, 1, 3, blocks)


def _third(design):
    third = {}
    for blk in design.blocks:
        for p, q in itertools.combinations(blk, 2):
            (z,) = set(blk) - {p, q}
            third[(p, q)] = z
            third[(q, p)] = z
    return third


def pasch_configurations(design: Design) -> list[tuple[Block, ...]]:
    """All Pasch configurations of an STS, as sorted 4-tuples of blocks."""
    if design.lam != 1 or design.k != 3:
        raise ValueError("Pasch configurations are defined for Steiner triple systems")
    third = _third(design)
    found = set()
    for b1, b2 in itertools.combinations(design.blocks, 2):
        common = set(b1) & set(b2)
        if len(common) != 1:
            continue
        (x,) = common
        a, b = sorted(set(b1) - {x})
        c, d = sorted(set(b2) - {x})
        for c1, d1 in ((c, d), (d, c)):
            e = third[(a, c1)]
            if e not in (x, b, d1) and third.get((b, d1)) == e:
                quad = tuple(sorted([b1, b2, tuple(sorted((a, c1, e))), tuple(sorted((b, d1, e)))]))
                found.add(quad)
    return sorted(found)


def pasch_switch(design: Design, which: int = 0) -> Design:
    """Trade one Pasch configuration for its opposite, giving another STS."""
    quads = pasch_configurations(design)
    if not quads:
        raise ValueError("design has no Pasch configuration")
    quad = quads[which % len(quads)]
    pts = Counter(p for blk in quad for p in blk)
    # the opposite trade covers the same 12 pairs with the other 4 triples
    six = sorted(pts)
    old_pairs = {pr for blk in quad for pr in itertools.combinations(blk, 2)}
    new = None
    for combo in itertools.combinations(itertools.combinations(six, 3), 4):
        if set(combo) == set(quad):
            continue
        pairs = [pr for blk in combo for pr in itertools.combinations(blk, 2)]
        if len(set(pairs)) == 12 and set(pairs) == old_pairs:
            new = combo
            break
    blocks = list(design.blocks)
    for blk in quad:
        blocks.remove(blk)
    blocks.extend(new)
    return make_design(design.v, 1, 3, blocks)
