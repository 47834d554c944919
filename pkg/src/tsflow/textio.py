"""Plain-text formats for designs, flows and weighted factorizations.

All three are line based with LF endings; lines starting with ``#`` are
comments. Writing a parsed value gives back the same bytes, apart from
comments, which are not kept (a provenance comment is rewritten when given).

    design v=<v> lambda=<lam> k=<k> b=<b>     flow: one signed integer
    0 1 2                                     per line, in block order
    ...

    graph n=<n> edges=<m>
    factor 0
    u v w
"""

from __future__ import annotations

import re

from .design import Design, make_design_ordered
from .factorizations import Graph, WeightedFactorization, edge
from .flows import FlowAssignment

_DESIGN_HEADER = re.compile(r"design v=(\d+) lambda=(\d+) k=(\d+) b=(\d+)")
_GRAPH_HEADER = re.compile(r"graph n=(\d+) edges=(\d+)")
_FACTOR = re.compile(r"factor (\d+)")


class FormatError(ValueError):
    pass


def _lines(text):
    return [ln for ln in text.split("\n") if ln.strip() and not ln.startswith("#")]


def _comment(provenance):
    return f"# provenance: {provenance}\n" if provenance else ""


def provenance_of(text: str) -> str | None:
    for ln in text.split("\n"):
        if ln.startswith("# provenance: "):
            return ln[len("# provenance: "):]
    return None


def format_design(design: Design, provenance: str | None = None) -> str:
    head = f"design v={design.v} lambda={design.lam} k={design.k} b={design.b}\n"
    body = "".join(" ".join(map(str, blk)) + "\n" for blk in design.blocks)
    return _comment(provenance) + head + body


def parse_design_ordered(text: str):
    """(Design, order) where design.blocks[i] is the file's block order[i].

    Blocks may appear in any order in the file; the Design is canonical and
    ``order`` carries block-aligned data such as a flow across.
    """
    lines = _lines(text)
    if not lines:
        raise FormatError("empty design file")
    m = _DESIGN_HEADER.fullmatch(lines[0])
    if not m:
        raise FormatError(f"bad design header {lines[0]!r}")
    v, lam, k, b = map(int, m.groups())
    rows = lines[1:]
    if len(rows) != b:
        raise FormatError(f"header says b={b} but {len(rows)} blocks follow")
    try:
        blocks = [tuple(int(x) for x in row.split(" ")) for row in rows]
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    return make_design_ordered(v, lam, k, blocks)


def parse_design(text: str) -> Design:
    return parse_design_ordered(text)[0]


def format_flow(flow: FlowAssignment, provenance: str | None = None) -> str:
    return _comment(provenance) + "".join(f"{w}\n" for w in flow.weights)


def parse_flow(text: str) -> FlowAssignment:
    try:
        return FlowAssignment(tuple(int(ln) for ln in _lines(text)))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def format_factorization(wf: WeightedFactorization, provenance: str | None = None) -> str:
    out = [_comment(provenance), f"graph n={wf.host.n} edges={len(wf.host.edges)}\n"]
    for i, factor in enumerate(wf.factors):
        out.append(f"factor {i}\n")
        out.extend(f"{u} {v} {wf.weights[(u, v)]}\n" for u, v in factor)
    return "".join(out)


def parse_factorization(text: str) -> WeightedFactorization:
    lines = _lines(text)
    if not lines:
        raise FormatError("empty factorization file")
    m = _GRAPH_HEADER.fullmatch(lines[0])
    if not m:
        raise FormatError(f"bad graph header {lines[0]!r}")
    n, m_edges = map(int, m.groups())
    factors, weights = [], {}
    for ln in lines[1:]:
        fm = _FACTOR.fullmatch(ln)
        if fm:
            if int(fm.group(1)) != len(factors):
                raise FormatError(f"factor {fm.group(1)} out of sequence")
            factors.append([])
            continue
        if not factors:
            raise FormatError("edge line before the first factor")
        try:
            u, v, w = (int(x) for x in ln.split(" "))
        except ValueError as exc:
            raise FormatError(f"bad edge line {ln!r}") from exc
        e = edge(u, v)
        if e in weights:
            raise FormatError(f"edge {e} listed twice")
        if (u, v) != e:
            raise FormatError(f"edge {u} {v} must list the smaller vertex first")
        factors[-1].append(e)
        weights[e] = w
    if len(weights) != m_edges:
        raise FormatError(f"header says {m_edges} edges but {len(weights)} follow")
    host = Graph(n, tuple(weights))
    return WeightedFactorization(host, tuple(tuple(f) for f in factors), weights)


def read_text(path) -> str:
    with open(path, encoding="ascii", newline="") as fh:
        return fh.read()


def write_text(path, text: str) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)
