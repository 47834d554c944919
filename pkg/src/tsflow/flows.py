"""Zero-sum flows on designs: verification, exhaustive search, unions."""

from __future__ import annotations

from dataclasses import dataclass, field

from ._budget import Budget
from .design import Design, make_design_ordered
from .errors import InvalidInputFlow, LengthMismatch, MismatchedPointSet


@dataclass(frozen=True)
class FlowAssignment:
    weights: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if any(w == 0 for w in self.weights):
            raise ValueError("flow weights must be nonzero")

    @property
    def width(self) -> int:
        return 1 + max((abs(w) for w in self.weights), default=0)

    def __neg__(self) -> "FlowAssignment":
        return FlowAssignment(tuple(-w for w in self.weights))

    def __len__(self):
        return len(self.weights)


@dataclass(frozen=True)
class FlowReport:
    valid: bool
    width: int
    violations: list = field(default_factory=list)  # (point, nonzero sum)
    short_circuit: bool = False


def point_sums(design: Design, weights) -> list[int]:
    sums = [0] * design.v
    for blk, w in zip(design.blocks, weights):
        for p in blk:
            sums[p] += w
    return sums


def verify_flow(design: Design, flow) -> FlowReport:
    weights = flow.weights if isinstance(flow, FlowAssignment) else tuple(flow)
    if len(weights) != design.b:
        raise LengthMismatch(f"{len(weights)} weights for {design.b} blocks")
    sums = point_sums(design, weights)
    violations = [(p, s) for p, s in enumerate(sums) if s != 0]
    # a zero weight shows up as a violation at each of the block's points
    for j, w in enumerate(weights):
        if w == 0:
            violations.extend((p, 0) for p in design.blocks[j])
    width = 1 + max((abs(w) for w in weights), default=0)
    return FlowReport(not violations, width, violations)


# -- exhaustive search -------------------------------------------------------


def _fail_first_order(columns, nrows):
    """Greedy order: repeatedly take the row with fewest undecided variables."""
    undecided = [set() for _ in range(nrows)]
    for j, col in enumerate(columns):
        for r, _ in col:
            undecided[r].add(j)
    order, placed = [], set()
    while len(order) < len(columns):
        live = [r for r in range(nrows) if undecided[r]]
        if not live:
            order.extend(j for j in range(len(columns)) if j not in placed)
            break
        r = min(live, key=lambda r: (len(undecided[r]), r))
        for j in sorted(undecided[r]):
            order.append(j)
            placed.add(j)
            for rr, _ in columns[j]:
                undecided[rr].discard(j)
    return order


def zero_sum_search(columns, nrows, width, budget=None, positive_first=True):
    """Find nonzero integers x_j, |x_j| < width, with sum_j c_rj x_j = 0 per row.

    ``columns[j]`` lists (row, coefficient) pairs for variable j. Returns
    the lexicographically first solution in search order, or None when the
    space is exhausted. The first variable is restricted to positive values
    when ``positive_first`` (negation symmetry), which keeps the search
    complete because -x is a solution whenever x is.
    """
    budget = Budget.coerce(budget)
    nvar = len(columns)
    if nvar == 0:
        return ()
    order = _fail_first_order(columns, nrows)
    m = width - 1
    # remaining capacity of each row after position i has been assigned
    cap = [0] * nrows
    for col in columns:
        for r, c in col:
            cap[r] += abs(c) * m
    steps = []
    for j in order:
        touched = []
        for r, c in columns[j]:
            cap[r] -= abs(c) * m
            touched.append((r, c, cap[r]))
        steps.append((j, touched))
    values = [v for a in range(1, width) for v in (a, -a)]
    sums = [0] * nrows
    x = [0] * nvar

    def candidates(i):
        j, touched = steps[i]
        forced = None
        for r, c, rem in touched:
            if rem == 0:
                s = sums[r]
                if s % c:
                    return ()
                val = -s // c
                if val == 0 or abs(val) > m or (forced is not None and forced != val):
                    return ()
                forced = val
        if forced is not None:
            opts = (forced,)
        else:
            opts = values
        if i == 0 and positive_first:
            opts = tuple(v for v in opts if v > 0)
        return opts

    def rec(i):
        if i == nvar:
            return True
        j, touched = steps[i]
        for val in candidates(i):
            budget.tick()
            ok = True
            for r, c, rem in touched:
                s = sums[r] + c * val
                if abs(s) > rem:
                    ok = False
                    break
            if not ok:
                continue
            for r, c, _ in touched:
                sums[r] += c * val
            x[j] = val
            if rec(i + 1):
                return True
            for r, c, _ in touched:
                sums[r] -= c * val
        return False

    return tuple(x) if rec(0) else None


def search_flow(design: Design, width: int, budget=None, short_circuit: bool = False):
    """Exhaustive DFS for a zero-sum flow of the given width.

    Returns a FlowAssignment, or None after the whole space is exhausted.
    Raises SearchTimeout if the budget runs out first. With
    ``short_circuit`` a symmetric design with nonsingular incidence returns
    None immediately.
    """
    if width < 2:
        raise ValueError("width must be at least 2")
    if short_circuit:
        from .linalg import is_symmetric_noflow

        if is_symmetric_noflow(design):
            return None
    columns = [[(p, 1) for p in blk] for blk in design.blocks]
    sol = zero_sum_search(columns, design.v, width, budget)
    return None if sol is None else FlowAssignment(sol)


def search_grouped_flow(design: Design, groups, width: int, budget=None):
    """Search flows constant on each group of block indices.

    Useful when the design has an automorphism: orbits of blocks become
    single variables. Returns a FlowAssignment or None; None only means no
    group-constant flow exists.
    """
    columns = []
    for g in groups:
        coef = {}
        for j in g:
            for p in design.blocks[j]:
                coef[p] = coef.get(p, 0) + 1
        columns.append(sorted(coef.items()))
    sol = zero_sum_search(columns, design.v, width, budget)
    if sol is None:
        return None
    weights = [0] * design.b
    for g, val in zip(groups, sol):
        for j in g:
            weights[j] = val
    return FlowAssignment(tuple(weights))


def min_flow_width(design: Design, max_width: int, budget=None):
    """Least width <= max_width admitting a flow, as (width, flow); None if none."""
    if max_width < 2:
        raise ValueError("max_width must be at least 2")
    budget = Budget.coerce(budget)
    for n in range(2, max_width + 1):
        f = search_flow(design, n, budget)
        if f is not None:
            return n, f
    return None


def union_flows(items):
    """Concatenate flowed designs on one point set into a single flowed design.

    ``items`` is a sequence of (Design, FlowAssignment). The result's blocks
    are canonically ordered and the weights permuted to match.
    """
    items = list(items)
    if not items:
        raise ValueError("nothing to combine")
    v, k = items[0][0].v, items[0][0].k
    blocks, weights, lam = [], [], 0
    for d, f in items:
        if d.v != v or d.k != k:
            raise MismatchedPointSet(f"cannot combine v={d.v},k={d.k} with v={v},k={k}")
        if not verify_flow(d, f).valid:
            raise InvalidInputFlow(f"input flow on TS({d.v},{d.lam}) is not zero-sum")
        blocks.extend(d.blocks)
        weights.extend(f.weights)
        lam += d.lam
    design, order = make_design_ordered(v, lam, k, blocks)
    return design, FlowAssignment(tuple(weights[i] for i in order))
