"""Weighted 1-factorizations of complete and wreath-product graphs.

A k-null 1-factorization gives every edge a nonzero weight of absolute
value below k so that each vertex and each 1-factor sums to zero. The
complete-graph constructions here feed the doubling construction.
Vertices are always 0..n-1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ._budget import Budget
from .errors import BadOrder, NotCubic, SearchExhausted, Unsupported
from .flows import zero_sum_search
from .latin import orthogonal_idempotent_pair

Edge = tuple[int, int]


def edge(u, v) -> Edge:
    if u == v:
        raise ValueError(f"loop at {u}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        es = tuple(sorted(edge(u, v) for u, v in self.edges))
        if len(set(es)) != len(es):
            raise ValueError("multi-edge")
        if any(not 0 <= x < self.n for e in es for x in e):
            raise ValueError("edge endpoint out of range")
        object.__setattr__(self, "edges", es)

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def adjacency(self) -> dict[int, set[int]]:
        adj = {x: set() for x in range(self.n)}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj


@dataclass(frozen=True)
class WeightedFactorization:
    host: Graph
    factors: tuple[tuple[Edge, ...], ...]
    weights: dict = field(hash=False)  # edge -> nonzero int

    def factor_weight(self, i) -> int:
        return sum(self.weights[e] for e in self.factors[i])

    @property
    def width(self) -> int:
        return 1 + max(abs(w) for w in self.weights.values())


@dataclass(frozen=True)
class TwoFactorization:
    host: Graph
    factors: tuple[tuple[Edge, ...], ...]


@dataclass
class NullReport:
    valid: bool
    vertex_violations: list = field(default_factory=list)  # (vertex, sum)
    factor_violations: list = field(default_factory=list)  # (factor index, sum)
    problems: list = field(default_factory=list)


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple(itertools.combinations(range(n), 2)))


def complete_bipartite(n: int) -> Graph:
    return Graph(2 * n, tuple((i, n + j) for i in range(n) for j in range(n)))


def components(g: Graph) -> list[list[int]]:
    adj = g.adjacency()
    seen, out = set(), []
    for s in range(g.n):
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        out.append(sorted(comp))
    return out


def cycle_type(edges, n=None) -> list[int]:
    """Sorted cycle lengths of a 2-regular edge set."""
    verts = sorted({x for e in edges for x in e})
    relabel = {x: i for i, x in enumerate(verts)}
    g = Graph(len(verts), tuple((relabel[u], relabel[v]) for u, v in edges))
    if any(d != 2 for d in g.degrees()):
        raise ValueError("not 2-regular")
    return sorted(len(c) for c in components(g))


def is_bipartite(g: Graph) -> bool:
    adj = g.adjacency()
    side = {}
    for s in range(g.n):
        if s in side:
            continue
        side[s] = 0
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in side:
                    side[y] = 1 - side[x]
                    stack.append(y)
                elif side[y] == side[x]:
                    return False
    return True


def two_null_obstruction(g: Graph) -> list[int]:
    """Vertices of odd degree: each one rules out a zero-sum ±1 weighting."""
    return [x for x, d in enumerate(g.degrees()) if d % 2]


# -- verification --------------------------------------------------------------


def verify_null_factorization(wf: WeightedFactorization, k: int) -> NullReport:
    rep = NullReport(True)
    host = wf.host
    host_edges = set(host.edges)
    seen = []
    for i, f in enumerate(wf.factors):
        covered = [x for e in f for x in e]
        if sorted(covered) != list(range(host.n)):
            rep.problems.append(f"factor {i} is not a perfect matching")
        seen.extend(edge(*e) for e in f)
    if sorted(seen) != sorted(host_edges):
        rep.problems.append("factors do not partition the edge set")
    sums = [0] * host.n
    for e in host.edges:
        w = wf.weights.get(e)
        if w is None:
            rep.problems.append(f"edge {e} has no weight")
            continue
        if w == 0 or abs(w) > k - 1:
            rep.problems.append(f"edge {e} weight {w} outside ±1..±{k - 1}")
        sums[e[0]] += w
        sums[e[1]] += w
    rep.vertex_violations = [(x, s) for x, s in enumerate(sums) if s]
    for i, f in enumerate(wf.factors):
        s = sum(wf.weights.get(edge(*e), 0) for e in f)
        if s:
            rep.factor_violations.append((i, s))
    rep.valid = not (rep.problems or rep.vertex_violations or rep.factor_violations)
    return rep


# -- plain factorizations --------------------------------------------------------


def round_robin(vertices) -> list[list[Edge]]:
    """Circle-method 1-factorization of the complete graph on an even vertex list."""
    vs = list(vertices)
    m = len(vs)
    if m % 2:
        raise BadOrder("round robin needs an even number of vertices")
    fixed, ring = vs[-1], vs[:-1]
    out = []
    for r in range(m - 1):
        f = [edge(fixed, ring[r])]
        for d in range(1, m // 2):
            f.append(edge(ring[(r + d) % (m - 1)], ring[(r - d) % (m - 1)]))
        out.append(sorted(f))
    return out


def walecki_hamiltonian_factorization(m: int) -> TwoFactorization:
    """(m-1)/2 edge-disjoint Hamiltonian cycles of K_m, m odd."""
    if m < 3 or m % 2 == 0:
        raise BadOrder(f"Hamiltonian factorization needs odd m >= 3, got {m}")
    cycles = hamiltonian_cycles(m)
    factors = tuple(
        tuple(sorted(edge(c[i], c[(i + 1) % m]) for i in range(m))) for c in cycles
    )
    return TwoFactorization(complete_graph(m), factors)


def hamiltonian_cycles(m: int) -> list[list[int]]:
    """Walecki's zigzag cycles through the hub m-1, as vertex sequences."""
    k = (m - 1) // 2
    hub = m - 1
    out = []
    for i in range(k):
        # zigzag i, i+1, i-1, i+2, i-2, ..., i+k around the ring Z_{2k}
        zig = [i]
        for d in range(1, k + 1):
            zig.append((i + d) % (2 * k))
            if d < k:
                zig.append((i - d) % (2 * k))
        out.append([hub] + zig)
    return out


# -- K_{n,n} and K_{4r} -----------------------------------------------------------


def _colour_weights(n):
    if n % 2 == 0:
        return [1 if c < n // 2 else -1 for c in range(n)]
    return [2, -1, -1] + [1 if c % 2 else -1 for c in range(3, n)]


def knn_null(n: int) -> WeightedFactorization:
    """3-null 1-factorization of K_{n,n}; parts are 0..n-1 and n..2n-1."""
    if n < 3:
        raise BadOrder(f"K_{{n,n}} needs n >= 3, got {n}")
    try:
        if n == 6:
            raise Unsupported("order 6")
        pair = orthogonal_idempotent_pair(n)
    except Unsupported:
        if n % 2:
            raise
        return _knn_from_blocks(n)
    cw = _colour_weights(n)
    factors = [[] for _ in range(n)]
    weights = {}
    for i in range(n):
        for j in range(n):
            e = (i, n + j)
            factors[pair.second(i, j)].append(e)
            weights[e] = cw[pair.first(i, j)]
    return WeightedFactorization(
        complete_bipartite(n), tuple(tuple(sorted(f)) for f in factors), weights
    )


def _knn_from_blocks(n):
    """K_{2m,2m} as four K_{m,m} blocks, each carrying a 3-null factorization."""
    m = n // 2
    base = knn_null(m)
    factors, weights = [], {}

    def place(du, dv):
        out = []
        for f in base.factors:
            out.append([(u + du, n + (v - m) + dv) for u, v in f])
        for u, v in base.host.edges:
            weights[(u + du, n + (v - m) + dv)] = base.weights[(u, v)]
        return out

    straight = zip(place(0, 0), place(m, m))
    crossed = zip(place(0, m), place(m, 0))
    for a, b in itertools.chain(straight, crossed):
        factors.append(tuple(sorted(a + b)))
    return WeightedFactorization(complete_bipartite(n), tuple(factors), weights)


def kn_3null(n: int) -> WeightedFactorization:
    """3-null 1-factorization of K_n for n = 4r, r > 1.

    K_n is two copies of K_{2r} joined by K_{2r,2r}. The bipartite part
    uses knn_null; paired factors M_i of the first half and M'_i of the
    second get weights (2, -2), (-1, 1), then (-1, 1), (1, -1), ...
    alternately.
    """
    if n % 4 or n <= 4:
        raise BadOrder(f"K_n needs n divisible by 4 and n > 4, got {n}")
    h = n // 2
    left = round_robin(range(h))
    right = round_robin(range(h, n))
    factors, weights = [], {}
    for i, (mi, mpi) in enumerate(zip(left, right), start=1):
        if i == 1:
            w = 2
        elif i == 2:
            w = -1
        else:
            w = -1 if i % 2 else 1
        for e in mi:
            weights[e] = w
        for e in mpi:
            weights[e] = -w
        factors.append(tuple(sorted(mi + mpi)))
    bip = knn_null(h)
    for f in bip.factors:
        factors.append(tuple(sorted(edge(u, v) for u, v in f)))
    for e, w in bip.weights.items():
        weights[edge(*e)] = w
    return WeightedFactorization(complete_graph(n), tuple(factors), weights)


# -- weight search on a fixed factorization --------------------------------------


def weight_fixed_factors(n, factors, k, budget=None):
    """Weights for a given edge partition with zero vertex and factor sums, or None."""
    edges = [e for f in factors for e in f]
    fidx = [i for i, f in enumerate(factors) for _ in f]
    columns = [[(u, 1), (v, 1), (n + i, 1)] for (u, v), i in zip(edges, fidx)]
    sol = zero_sum_search(columns, n + len(factors), k, budget)
    if sol is None:
        return None
    return dict(zip(edges, sol))


def _edge_colourings(g: Graph, budget):
    """Proper 3-edge-colourings of a cubic graph, up to permuting colours."""
    adj = g.adjacency()
    order = []
    seen = set()
    for s in range(g.n):
        stack = [s]
        while stack:
            x = stack.pop()
            for y in sorted(adj[x]):
                e = edge(x, y)
                if e not in seen:
                    seen.add(e)
                    order.append(e)
                    stack.append(y)
    colour = {}
    at = [set() for _ in range(g.n)]

    def rec(i, used):
        if i == len(order):
            yield dict(colour)
            return
        budget.tick()
        u, v = order[i]
        # colours beyond the first unused one are interchangeable
        for c in range(min(used + 1, 3)):
            if c in at[u] or c in at[v]:
                continue
            colour[order[i]] = c
            at[u].add(c)
            at[v].add(c)
            yield from rec(i + 1, max(used, c + 1))
            at[u].discard(c)
            at[v].discard(c)
            del colour[order[i]]

    yield from rec(0, 0)


def cubic_null_search(g: Graph, k: int, budget=None):
    """A k-null 1-factorization of a cubic graph, or None if none exists.

    Enumerates proper 3-edge-colourings and, for each, searches weights
    with zero vertex sums and zero colour-class sums.
    """
    if any(d != 3 for d in g.degrees()):
        raise NotCubic("graph is not 3-regular")
    budget = Budget.coerce(budget)
    for col in _edge_colourings(g, budget):
        factors = [tuple(sorted(e for e, c in col.items() if c == i)) for i in range(3)]
        weights = weight_fixed_factors(g.n, factors, k, budget)
        if weights is not None:
            return WeightedFactorization(g, tuple(factors), weights)
    return None


# -- K_{6k+4} ------------------------------------------------------------------------


def k6k4_factors(k: int):
    """The cyclic 1-factorization F_s = F_0 + s of K_{6k+4} on Z_{6k+3} + {inf}."""
    m = 6 * k + 3
    inf = m
    base = [edge(x, (-x) % m) for x in range(1, 3 * k + 2)] + [edge(0, inf)]

    def shift(e, s):
        return edge(*(x if x == inf else (x + s) % m for x in e))

    return [tuple(sorted(shift(e, s) for e in base)) for s in range(m)], shift


def k6k4_union(k: int, s: int = 0):
    """Edges of F_s, F_{s+d}, F_{s+2d} with d = 2k+1: a K_4 plus k copies of K_{3,3}."""
    factors, _ = k6k4_factors(k)
    d = 2 * k + 1
    return [factors[(s + j * d) % (6 * k + 3)] for j in range(3)]


def k6k4_4null(k: int, budget=None) -> WeightedFactorization:
    """4-null 1-factorization of K_{6k+4}, k > 1.

    The 2k+1 unions of three factors are translates of each other. In the
    union through F_0 the K_4 and two of the K_{3,3}s are weighted jointly
    by search, and each remaining K_{3,3} separately; translating the
    weights covers every other union.
    """
    if k <= 1:
        raise BadOrder(f"K_{{6k+4}} construction needs k > 1, got {k}")
    n = 6 * k + 4
    factors, shift = k6k4_factors(k)
    union = k6k4_union(k)
    g = Graph(n, tuple(e for f in union for e in f))
    comps = components(g)
    comps = [c for c in comps if len(c) > 1]
    k4 = [c for c in comps if len(c) == 4]
    k33 = [c for c in comps if len(c) == 6]
    if len(k4) != 1 or len(k33) != k:
        raise SearchExhausted("union is not K_4 plus k copies of K_{3,3}")
    groups = [k4[0] + k33[0] + k33[1]] + k33[2:]
    weights0 = {}
    for grp in groups:
        sub = set(grp)
        part = [tuple(e for e in f if e[0] in sub) for f in union]
        w = weight_fixed_factors(n, part, 4, budget)
        if w is None:
            raise SearchExhausted("no 4-null weighting for a component group")
        weights0.update(w)
    d = 2 * k + 1
    weights = {}
    for s in range(d):
        for e, w in weights0.items():
            weights[shift(e, s)] = w
    return WeightedFactorization(complete_graph(n), tuple(factors), weights)


# -- K_{4k+2} ------------------------------------------------------------------------


def _wreath_vertex(x, a):
    return 2 * x + a


def wreath_edges(cycle, with_fibers=False):
    """C_m wreath K2-bar along a vertex cycle of K_m; fibers add the K_2 edges."""
    m = len(cycle)
    es = []
    for i in range(m):
        x, y = cycle[i], cycle[(i + 1) % m]
        for a in range(2):
            for b in range(2):
                es.append(edge(_wreath_vertex(x, a), _wreath_vertex(y, b)))
    if with_fibers:
        es.extend(edge(_wreath_vertex(x, 0), _wreath_vertex(x, 1)) for x in cycle)
    return es


def _f_cycles(cycle):
    """One C_6 + (k-1) C_4 2-factor of the wreath along ``cycle``, as vertex cycles.

    Positions index the cycle; the C_6 runs through positions 0..3 and the
    C_4s each take one vertex at q, both at q+1 and one at q+2 for
    q = 3, 5, ..., ending on the free vertex of position 0.
    """
    m = len(cycle)
    k = (m - 1) // 2

    def vert(pos, a):
        return _wreath_vertex(cycle[pos % m], a)

    out = [[vert(0, 0), vert(1, 0), vert(2, 0), vert(3, 0), vert(2, 1), vert(1, 1)]]
    start = 1
    for j in range(k - 1):
        q = 3 + 2 * j
        end = 1 if j == k - 2 else 0
        out.append([vert(q, start), vert(q + 1, 0), vert(q + 2, end), vert(q + 1, 1)])
        start = 1 - end
    return out


def _l_cycles(cycle):
    """C_6 + C_8 bipartite 2-factor of the wreath along a 7-cycle."""
    def vert(pos, a):
        return _wreath_vertex(cycle[pos % 7], a)

    c6 = [vert(0, 0), vert(1, 0), vert(2, 0), vert(3, 0), vert(2, 1), vert(1, 1)]
    c8 = [vert(3, 1), vert(4, 0), vert(5, 0), vert(6, 0), vert(0, 1), vert(6, 1),
          vert(5, 1), vert(4, 1)]
    return [c6, c8]


def _cycle_edges(cyc):
    return [edge(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc))]


def complement_cycles(host_edges, cycles):
    """Cycles of host minus the given 2-factor (must be 2-regular)."""
    used = {e for c in cycles for e in _cycle_edges(c)}
    rest = [e for e in host_edges if e not in used]
    adj = {}
    for u, v in rest:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    seen, out = set(), []
    for s in sorted(adj):
        if s in seen:
            continue
        cyc, prev, x = [s], None, s
        seen.add(s)
        while True:
            nxt = [y for y in adj[x] if y != prev][0] if prev is not None else adj[x][0]
            if nxt == s:
                break
            cyc.append(nxt)
            seen.add(nxt)
            prev, x = x, nxt
        out.append(cyc)
    return out


def f_weighting(cycles, magnitudes):
    """Split even cycles into two matchings with weights making both sum to zero.

    Along cycle c the edges alternate between +-magnitudes[c]; each cycle's
    orientation is chosen greedily against the running total of the first
    matching. Returns (matching_a, matching_b, weights).
    """
    ma, mb, weights = [], [], {}
    total = 0
    for cyc, mag in zip(cycles, magnitudes):
        half = len(cyc) // 2
        sign = 1 if total <= 0 else -1
        if total == 0 and not ma:
            sign = -1
        for i, e in enumerate(_cycle_edges(cyc)):
            if i % 2 == 0:
                ma.append(e)
                weights[e] = sign * mag
            else:
                mb.append(e)
                weights[e] = -sign * mag
        total += sign * mag * half
    if total != 0:
        raise SearchExhausted("cycle weights cannot be balanced")
    return sorted(ma), sorted(mb), weights


def _f_magnitudes(k):
    # C_6 gets 2; one C_4 gets 2 or 3 by the parity of the C_4 count; the rest 1
    c4 = k - 1
    special = 2 if c4 % 2 == 0 else 3
    return [2] + ([special] if c4 else []) + [1] * max(c4 - 1, 0)


def wreath_two_factors(cycle):
    """The two C_6 + (k-1) C_4 2-factors of the wreath along ``cycle``."""
    first = _f_cycles(cycle)
    second = complement_cycles(wreath_edges(cycle), first)
    second.sort(key=len, reverse=True)  # the C_6 first, as in ``first``
    return first, second


def k4k2_5null(k: int, budget=None) -> WeightedFactorization:
    """5-null 1-factorization of K_{4k+2}, k >= 2.

    Vertex 2x+a is copy a of vertex x of K_{2k+1}. Each Walecki cycle gives
    a wreath with empty fibers, except the last which also takes the fiber
    edges. Every empty-fiber wreath splits into two weighted C_6 + C_4s
    2-factors, each giving two zero-sum matchings. The last wreath gives one
    such 2-factor (C_6 + C_8 when k = 3) and a cubic remainder weighted by
    cubic_null_search.
    """
    if k < 2:
        raise BadOrder(f"K_{{4k+2}} construction needs k >= 2, got {k}")
    m = 2 * k + 1
    n = 2 * m
    budget = Budget.coerce(budget)
    cycles = hamiltonian_cycles(m)
    factors, weights = [], {}
    mags = _f_magnitudes(k)
    for cyc in cycles[:-1]:
        for two_factor in wreath_two_factors(cyc):
            ma, mb, w = f_weighting(two_factor, mags)
            factors += [tuple(ma), tuple(mb)]
            weights.update(w)
    last = cycles[-1]
    if k == 3:
        special, special_mags = _l_cycles(last), [4, 3]
    else:
        special, special_mags = _f_cycles(last), mags
    ma, mb, w = f_weighting(special, special_mags)
    factors += [tuple(ma), tuple(mb)]
    weights.update(w)
    used = {e for c in special for e in _cycle_edges(c)}
    rest = [e for e in wreath_edges(last, with_fibers=True) if e not in used]
    cubic = cubic_null_search(Graph(n, tuple(rest)), 5, budget)
    if cubic is None:
        raise SearchExhausted("cubic remainder has no 5-null 1-factorization")
    factors += list(cubic.factors)
    weights.update(cubic.weights)
    return WeightedFactorization(
        complete_graph(n), tuple(tuple(sorted(f)) for f in factors), weights
    )
