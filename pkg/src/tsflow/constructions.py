"""Triple systems that come with a certified zero-sum flow.

Every constructor returns a FlowedDesign whose flow has been checked by
verify_flow and whose design has been revalidated from its block list.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ._budget import Budget
from .design import (
    Design,
    HananiStructure,
    Resolution,
    affine_sts9,
    check_admissible,
    check_hanani,
    check_resolution,
    develop_cyclic,
    develop_rotational,
    find_cyclic_starters,
    find_resolution,
    find_rotational_starters,
    make_design,
    make_design_ordered,
    projective_sts15,
    rotational_resolvable_ts2,
    StarterSet,
)
from .errors import (
    FactorCountMismatch,
    InvalidCertificate,
    InvalidStructure,
    NoDesign,
    NoFlowExists,
    NotAchieved,
    SearchTimeout,
    ShortOrbit,
    SingleClass,
    TSFlowError,
    Unsupported,
    UnsupportedOrder,
)
from .factorizations import WeightedFactorization, verify_null_factorization
from .flows import FlowAssignment, search_flow, union_flows, verify_flow
from .latin import orthogonal_idempotent_pair, transversals_from_mate


@dataclass(frozen=True)
class FlowedDesign:
    design: Design
    flow: FlowAssignment
    width: int
    provenance: str


def certify(design: Design, flow: FlowAssignment, provenance: str) -> FlowedDesign:
    """Re-check both the design and the flow before handing them out."""
    make_design(design.v, design.lam, design.k, design.blocks)
    report = verify_flow(design, flow)
    if not report.valid:
        raise InvalidCertificate(f"{provenance}: flow fails at {report.violations[:3]}")
    return FlowedDesign(design, flow, flow.width, provenance)


def class_labels(rho: int) -> list[int]:
    """Zero-sum class labels: +1/-1 in pairs, led by 1, 1, -2 when rho is odd."""
    if rho < 2:
        raise SingleClass(f"{rho} class(es): at least two are needed")
    head = [1, 1, -2] if rho % 2 else []
    rest = rho - len(head)
    return head + [1 if i % 2 == 0 else -1 for i in range(rest)]


def label_alpha_resolvable(design: Design, res: Resolution) -> FlowedDesign:
    problems = check_resolution(design, res)
    if problems:
        raise InvalidStructure("; ".join(problems[:3]))
    labels = class_labels(len(res.classes))
    weights = [0] * design.b
    for lab, cls in zip(labels, res.classes):
        for j in cls:
            weights[j] = lab
    rho = len(res.classes)
    return certify(design, FlowAssignment(weights), f"resolution alpha={res.alpha} classes={rho}")


def label_hanani(h: HananiStructure) -> FlowedDesign:
    problems = check_hanani(h)
    if problems:
        raise InvalidStructure("; ".join(problems))
    u = h.u
    if u < 2:
        raise InvalidStructure("a single partial-class block cannot carry a zero-sum label")
    if u % 2 == 0:
        p0 = [(-1) ** i for i in range(1, u + 1)]
    else:
        p0 = [(-1) ** i for i in range(1, u - 2)] + [-1, -1, 2]
    d = h.design
    weights = [0] * d.b
    label_of_point = {}
    for lab, j in zip(p0, h.partial_class):
        weights[j] = lab
        for p in d.blocks[j]:
            label_of_point[p] = lab
    for cls, x in zip(h.almost_classes, h.missing_point):
        for j in cls:
            weights[j] = label_of_point[x]
    return certify(d, FlowAssignment(weights), f"hanani u={u}")


def _orbits(tags):
    groups = {}
    for j, t in enumerate(tags):
        groups.setdefault(t, []).append(j)
    return [tuple(groups[t]) for t in sorted(groups)]


def label_cyclic_orbits(design: Design, tags) -> FlowedDesign:
    """Label a cyclic design whose full orbits serve as 3-resolution classes."""
    orbits = _orbits(tags)
    for orb in orbits:
        if len(orb) != design.v:
            raise ShortOrbit(f"orbit of length {len(orb)} in a design on {design.v} points")
    fd = label_alpha_resolvable(design, Resolution(design.k, tuple(orbits)))
    return FlowedDesign(fd.design, fd.flow, fd.width, f"cyclic orbits={len(orbits)}")


def label_rotational_orbits(design: Design, tags) -> FlowedDesign:
    """Label a design developed mod v-1 with v-1 fixed.

    Orbits through the fixed point meet each other point twice and the
    rest meet it three times, so each family gets its own zero-sum labels.
    """
    inf = design.v - 1
    orbits = _orbits(tags)
    fixed = [o for o in orbits if inf in design.blocks[o[0]]]
    plain = [o for o in orbits if inf not in design.blocks[o[0]]]
    weights = [0] * design.b
    for family in (fixed, plain):
        for lab, orb in zip(class_labels(len(family)), family):
            for j in orb:
                weights[j] = lab
    return certify(design, FlowAssignment(weights),
                   f"rotational orbits={len(plain)}+{len(fixed)}")


# -- fixed small designs ------------------------------------------------------------

_TS62 = [
    ((1, 2, 3), 1), ((1, 3, 4), -2), ((1, 4, 5), 2), ((1, 5, 6), -3), ((1, 2, 6), 2),
    ((2, 3, 5), -2), ((3, 4, 6), 1), ((2, 4, 5), 1), ((3, 5, 6), 2), ((2, 4, 6), -2),
]
# starters over Z_5 with the fixed point 5, and the weight of each orbit
_TS64 = [((5, 0, 1), 1), ((5, 0, 2), -1), ((0, 1, 2), 1), ((0, 2, 4), -1)]
_TS66 = [((5, 0, 1), 2), ((5, 0, 1), -1), ((5, 0, 2), -1), ((0, 1, 2), 2),
         ((0, 2, 4), -1), ((0, 2, 4), -1)]


def ts62_table():
    """The TS(6,2) blocks (0-based) and weights in their listed order."""
    return [tuple(p - 1 for p in blk) for blk, _ in _TS62], [w for _, w in _TS62]


def _develop_z5(starters, lam, name):
    blocks, weights = [], []
    for blk, w in starters:
        for t in range(5):
            blocks.append(tuple(x if x == 5 else (x + t) % 5 for x in blk))
            weights.append(w)
    design, order = make_design_ordered(6, lam, 3, blocks)
    return certify(design, FlowAssignment([weights[i] for i in order]), name)


@lru_cache(maxsize=None)
def small_fixed_design(name: str) -> FlowedDesign:
    if name == "TS62":
        blocks, weights = ts62_table()
        design, order = make_design_ordered(6, 2, 3, blocks)
        return certify(design, FlowAssignment([weights[i] for i in order]), "table TS62")
    if name == "TS64":
        return _develop_z5(_TS64, 4, "table TS64")
    if name == "TS66":
        return _develop_z5(_TS66, 6, "table TS66")
    raise ValueError(f"unknown fixed design {name!r}")


# -- Latin-square constructions ----------------------------------------------------


def transversal_labels(count: int) -> list[int]:
    """Labels for the off-diagonal transversals: +2, -1, -1 first if count is odd."""
    head = [2, -1, -1] if count % 2 else []
    return head + [1 if i % 2 == 0 else -1 for i in range(count - len(head))]


def _latin_pair(n, seed=0):
    try:
        pair = orthogonal_idempotent_pair(n, seed)
    except Unsupported as exc:
        raise UnsupportedOrder(str(exc)) from exc
    return pair, transversals_from_mate(pair)


@lru_cache(maxsize=None)
def ts_lambda6(v: int, seed: int = 0) -> FlowedDesign:
    """TS(v,6) from the triples (i, j, L(i,j)), i != j, of an idempotent square."""
    if v == 6:
        return small_fixed_design("TS66")
    if v < 3:
        raise UnsupportedOrder(f"v={v}")
    pair, trans = _latin_pair(v, seed)
    off = trans.transversals[:-1]
    blocks, weights = [], []
    for lab, cells in zip(transversal_labels(len(off)), off):
        for i, j in cells:
            blocks.append(tuple(sorted((i, j, pair.first(i, j)))))
            weights.append(lab)
    design, order = make_design_ordered(v, 6, 3, blocks)
    return certify(design, FlowAssignment([weights[i] for i in order]), f"latin-lambda6 v={v}")


@lru_cache(maxsize=None)
def bose_modified(v: int, seed: int = 0) -> FlowedDesign:
    """TS(v,2) on Z_n x Z_3 plus a fixed point, n = (v-1)/3.

    Point x_i is 3x + i and the fixed point is v-1. Width 3 when n is even,
    5 when n is odd.
    """
    if v % 6 not in (1, 4):
        raise UnsupportedOrder(f"v={v} is not 1 or 4 mod 6")
    n = (v - 1) // 3
    if n in (1, 2, 6):
        raise UnsupportedOrder(f"n={n} has no idempotent square with a mate")
    pair, trans = _latin_pair(n, seed)
    inf = v - 1
    blocks, weights = [], []
    off = trans.transversals[:-1]
    for lab, cells in zip(transversal_labels(len(off)), off):
        for x, y in cells:
            z = pair.first(x, y)
            for i in range(3):
                blocks.append((3 * x + i, 3 * y + i, 3 * z + (i + 1) % 3))
                weights.append(lab)
    if n % 2 == 0:
        alphas = [1 if x % 2 == 0 else -1 for x in range(n)]
    else:
        alphas = [1, 1, -2] + [1 if x % 2 == 0 else -1 for x in range(n - 3)]
    for x, a in enumerate(alphas):
        x0, x1, x2 = 3 * x, 3 * x + 1, 3 * x + 2
        blocks += [(inf, x0, x1), (inf, x1, x2), (inf, x0, x2), (x0, x1, x2)]
        weights += [a, a, a, -2 * a]
    design, order = make_design_ordered(v, 2, 3, blocks)
    return certify(design, FlowAssignment([weights[i] for i in order]), f"bose v={v}")


# -- doubling -------------------------------------------------------------------------


def double_sts(base: FlowedDesign, wf: WeightedFactorization, k: int | None = None) -> FlowedDesign:
    """Embed an STS(v) with a flow into an STS(2v+1) using a null 1-factorization of K_{v+1}.

    Old points keep labels 0..v-1; vertex y of K_{v+1} becomes v + y. Each
    edge {y, z} of factor i gives the block {i, v+y, v+z} with the edge's
    weight.
    """
    d = base.design
    if d.lam != 1 or d.k != 3:
        raise InvalidStructure("doubling needs a Steiner triple system")
    v = d.v
    if wf.host.n != v + 1 or len(wf.factors) != v:
        raise FactorCountMismatch(
            f"need {v} factors of K_{v + 1}, got {len(wf.factors)} of a {wf.host.n}-vertex graph"
        )
    k = wf.width if k is None else k
    report = verify_null_factorization(wf, k)
    if not report.valid:
        raise InvalidCertificate(f"factorization is not {k}-null")
    blocks = list(d.blocks)
    weights = list(base.flow.weights)
    for i, factor in enumerate(wf.factors):
        for y, z in factor:
            blocks.append((i, v + y, v + z))
            weights.append(wf.weights[(y, z)])
    design, order = make_design_ordered(2 * v + 1, 1, 3, blocks)
    return certify(design, FlowAssignment([weights[i] for i in order]),
                   f"double v={v} from [{base.provenance}]")


# -- bases for the driver ------------------------------------------------------------


def _replicate(design: Design, classes, alpha, times):
    """``times`` copies of a design, keeping each copy's classes apart."""
    blocks, tags = [], []
    for c in range(times):
        for ci, cls in enumerate(classes):
            for j in cls:
                blocks.append(design.blocks[j])
                tags.append((c, ci))
    new, order = make_design_ordered(design.v, design.lam * times, design.k, blocks)
    groups = {}
    for idx, old in enumerate(order):
        groups.setdefault(tags[old], []).append(idx)
    return new, Resolution(alpha, tuple(tuple(groups[t]) for t in sorted(groups)))


@lru_cache(maxsize=None)
def _resolvable_base(v):
    """(design, resolution) of a resolvable TS(v, lam0), or None."""
    if v == 3:
        d = make_design(3, 1, 3, [(0, 1, 2)])
        return d, Resolution(1, ((0,),))
    if v == 9:
        d = affine_sts9()
    elif v == 15:
        d = projective_sts15()
    else:
        d = None
    if d is not None:
        res = find_resolution(d, 1, Budget(seconds=30))
        if res is not None:
            return d, res
    if v % 3 == 0 and v >= 9:
        return rotational_resolvable_ts2(v, Budget(seconds=60))
    return None


@lru_cache(maxsize=None)
def _cyclic_base(v, lam0):
    st = find_cyclic_starters(v, lam0, True, Budget(seconds=30))
    if st is None:
        return None
    d, tags = develop_cyclic(st)
    return d, Resolution(3, tuple(_orbits(tags)))


def _copies(base, lam, name):
    design, res = base
    if lam % design.lam:
        return None
    times = lam // design.lam
    new, res2 = _replicate(design, res.classes, res.alpha, times)
    if len(res2.classes) < 2:
        return None
    fd = label_alpha_resolvable(new, res2)
    return FlowedDesign(fd.design, fd.flow, fd.width, f"{name} x{times} [{fd.provenance}]")


def _union(parts, name):
    d, f = union_flows((p.design, p.flow) for p in parts)
    return certify(d, f, name + " [" + " + ".join(p.provenance for p in parts) + "]")


def _fixed_six(lam):
    if lam == 2:
        return small_fixed_design("TS62")
    if lam % 4 == 0:
        parts = [small_fixed_design("TS64")] * (lam // 4)
    else:
        parts = [small_fixed_design("TS66")] + [small_fixed_design("TS64")] * ((lam - 6) // 4)
    return parts[0] if len(parts) == 1 else _union(parts, f"tables v=6 lambda={lam}")


def _paths(v, lam, seed=0):
    """Candidate constructions in priority order, as (name, thunk)."""
    out = []
    if v == 6:
        out.append(("tables", lambda: _fixed_six(lam)))

    # resolution labeling
    if v % 3 == 0:
        out.append(("resolution", lambda: _resolution_path(v, lam)))

    # cyclic orbit labeling
    if v % 6 == 1:
        out.append(("cyclic-sts", lambda: _cyclic_path(v, lam, 1)))
    if v % 12 in (1, 4, 7) and lam % 2 == 0:
        out.append(("cyclic-lambda2", lambda: _cyclic_path(v, lam, 2)))
    if v % 3 == 1 and lam % 4 == 0:
        out.append(("cyclic-lambda4", lambda: _cyclic_path(v, lam, 4)))
    if v % 2 == 1 and lam % 3 == 0:
        out.append(("cyclic-lambda3", lambda: _cyclic_path(v, lam, 3)))

    # Latin square and Bose constructions
    if lam % 6 == 0:
        out.append(("latin-lambda6", lambda: _latin_path(v, lam, seed)))
    if v % 12 == 10 and lam % 4 == 2:
        out.append(("bose", lambda: _bose_path(v, lam, seed)))
    if v % 6 == 1 and lam % 6 in (2, 4) and v not in (7, 19):
        out.append(("bose", lambda: _copies_fd(bose_modified(v, seed), lam)))

    # orbit labeling of a design developed around a fixed point
    if v % 2 == 0 and lam % 6 == 0:
        out.append(("rotational", lambda: _rotational_path(v, lam)))
    # odd lambda with no resolvable STS at hand: an odd cyclic part plus lambda=2 copies
    if v % 6 == 3 and lam % 2 == 1 and lam >= 3:
        out.append(("cyclic+resolution", lambda: _union(
            [_cyclic_path(v, 3, 3), _resolution_path(v, lam - 3)], f"split v={v} lambda={lam}")))
    return out


def _resolution_path(v, lam):
    base = _resolvable_base(v)
    if base is None:
        return None
    return _copies(base, lam, f"resolvable TS({v},{base[0].lam})")


def _cyclic_path(v, lam, lam0):
    base = _cyclic_base(v, lam0)
    if base is None:
        return None
    return _copies(base, lam, f"cyclic TS({v},{lam0})")


def _copies_fd(fd, lam):
    if lam % fd.design.lam:
        return None
    times = lam // fd.design.lam
    return fd if times == 1 else _union([fd] * times, f"copies x{times}")


def _latin_path(v, lam, seed=0):
    return _copies_fd(ts_lambda6(v, seed), lam)


def _bose_path(v, lam, seed=0):
    # lambda = 2 mod 4 on v = 10 mod 12: Bose for lambda = 2, else one TS(v,6)
    # and copies of a cyclic TS(v,4)
    if lam == 2:
        return bose_modified(v, seed)
    parts = [ts_lambda6(v, seed)]
    if lam > 6:
        parts.append(_cyclic_path(v, lam - 6, 4))
    if any(p is None for p in parts):
        return None
    return _union(parts, f"split v={v} lambda={lam}")


def _rotational_path(v, lam):
    st = find_rotational_starters(v, 6, Budget(seconds=30))
    if st is None:
        return None
    d, tags = develop_rotational(st)
    return _copies_fd(label_rotational_orbits(d, tags), lam)


@lru_cache(maxsize=None)
def any_design(v, lam):
    """Some TS(v, lam) for the search fallback, or None."""
    if v % 6 in (1, 3) and v >= 7:
        st = find_cyclic_starters(v, 1, require_full_orbits=False, budget=Budget(seconds=30))
        if st is not None:
            d, _ = develop_cyclic(st)
            return d if lam == 1 else make_design(v, lam, 3, list(d.blocks) * lam)
    st = find_cyclic_starters(v, lam, require_full_orbits=False, budget=Budget(seconds=30))
    if st is not None:
        return develop_cyclic(st)[0]
    return None


def exists_with_flow(v: int, lam: int, max_width: int = 5, budget=None, seed: int = 0) -> FlowedDesign:
    """A TS(v, lam) with a zero-sum flow of width at most max_width.

    Raises NoDesign for inadmissible parameters, NoFlowExists for the
    certified exceptions, and NotAchieved (listing the attempted paths)
    when nothing within max_width was produced.
    """
    if v < 3 or lam < 1 or not check_admissible(v, lam):
        raise NoDesign(f"no TS({v},{lam}) exists")
    if (v, lam) in ((3, 1), (4, 2), (7, 1)):
        raise NoFlowExists(f"TS({v},{lam}) is symmetric: its incidence matrix is nonsingular")
    if (v, lam) == (6, 2) and max_width < 4:
        raise NoFlowExists("the unique TS(6,2) has no zero-sum 3-flow")
    attempted = []
    best = None
    built = None  # some design from the structured paths, kept for the search fallback
    for name, thunk in _paths(v, lam, seed):
        try:
            fd = thunk()
        except (TSFlowError, SearchTimeout) as exc:
            attempted.append(f"{name}: {exc}")
            continue
        if fd is None:
            attempted.append(f"{name}: not available")
            continue
        built = built or fd.design
        if fd.width <= max_width and (best is None or fd.width < best.width):
            best = fd
        attempted.append(f"{name}: width {fd.width}")
        if best is not None and best.width <= 3:
            break
    if best is not None:
        return certify(best.design, best.flow, best.provenance)
    design = any_design(v, lam) or built
    if design is not None:
        try:
            budget = Budget.coerce(budget if budget is not None else Budget(seconds=60))
            # narrow widths first: width 3 is usually found fastest
            widths = [2] if max_width == 2 else range(3, max_width + 1)
            for w in widths:
                f = search_flow(design, w, budget)
                if f is not None:
                    return certify(design, f, f"search width={w}")
            attempted.append("search: no flow on the constructed design")
        except SearchTimeout as exc:
            attempted.append(f"search: {exc}")
    raise NotAchieved(f"no TS({v},{lam}) with a {max_width}-flow was produced", attempted)
