"""Command-line front end.

stdout carries exactly one summary line, ``STATUS <code> WIDTH <n|-> FILE <path|->``;
diagnostics go to stderr. Exit codes: 0 found/valid, 1 certified negative,
2 usage or I/O error, 3 timeout or unsupported parameters.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from ._budget import Budget
from .constructions import double_sts, exists_with_flow, FlowedDesign
from .design import check_admissible
from .errors import (
    BadOrder,
    DegenerateOrder,
    FactorCountMismatch,
    InvalidCertificate,
    LengthMismatch,
    NoDesign,
    NoFlowExists,
    NotAchieved,
    SearchTimeout,
    TSFlowError,
    Unsupported,
)
from .factorizations import k4k2_5null, k6k4_4null, kn_3null, knn_null, verify_null_factorization
from .flows import FlowAssignment, search_flow, verify_flow
from .linalg import bound_flow
from .textio import (
    FormatError,
    format_design,
    format_factorization,
    format_flow,
    parse_design_ordered,
    parse_factorization,
    parse_flow,
    provenance_of,
    read_text,
    write_text,
)

OK, NEGATIVE, USAGE, GAVE_UP = 0, 1, 2, 3


@dataclass
class CommandResult:
    exit_code: int
    artifacts: list = field(default_factory=list)
    width: int | None = None
    message: str = ""

    @property
    def summary(self) -> str:
        width = "-" if self.width is None else str(self.width)
        path = self.artifacts[0] if self.artifacts else "-"
        return f"STATUS {self.exit_code} WIDTH {width} FILE {path}"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _parser():
    p = _Parser(prog="tsflow", description="Zero-sum flows on triple systems.")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized searches")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for batch")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="construct a TS(v,lambda) with a flow")
    g.add_argument("--v", type=int, required=True)
    g.add_argument("--lambda", dest="lam", type=int, required=True)
    g.add_argument("--max-width", type=int, default=3)
    g.add_argument("--timeout", type=float, default=60.0)
    g.add_argument("--out", required=True)

    v = sub.add_parser("verify", help="check a flow against a design")
    v.add_argument("--design", required=True)
    v.add_argument("--flow", required=True)

    s = sub.add_parser("search", help="exhaustive search for a flow of a given width")
    s.add_argument("--design", required=True)
    s.add_argument("--width", type=int, required=True)
    s.add_argument("--timeout", type=float, default=None)
    s.add_argument("--out", default=None, help="write the flow found here")

    d = sub.add_parser("double", help="embed an STS(v) with a flow into an STS(2v+1)")
    d.add_argument("--design", required=True)
    d.add_argument("--flow", required=True)
    d.add_argument("--factorization", required=True)
    d.add_argument("--out", required=True)

    f = sub.add_parser("factorize", help="write a null 1-factorization")
    f.add_argument("--family", choices=["knn", "k4r", "k6k4", "k4k2"], required=True)
    f.add_argument("--param", type=int, required=True)
    f.add_argument("--out", required=True)

    b = sub.add_parser("bound", help="five-valued flow of bounded magnitude")
    b.add_argument("--design", required=True)
    b.add_argument("--out", required=True)

    r = sub.add_parser("batch", help="run the existence driver over a grid")
    r.add_argument("--vmax", type=int, required=True)
    r.add_argument("--lmax", type=int, required=True)
    r.add_argument("--max-width", type=int, default=3)
    r.add_argument("--report", required=True)
    return p


def _load_flowed(design_path, flow_path):
    dtext = read_text(design_path)
    design, order = parse_design_ordered(dtext)
    flow = parse_flow(read_text(flow_path))
    if len(flow) != design.b:
        raise LengthMismatch(f"{len(flow)} weights for {design.b} blocks")
    # the flow file follows the design file's block order
    flow = FlowAssignment(tuple(flow.weights[i] for i in order))
    return design, flow, provenance_of(dtext)


def _write_flowed(fd: FlowedDesign, out):
    write_text(out, format_design(fd.design, fd.provenance))
    write_text(out + ".flow", format_flow(fd.flow))
    return [out, out + ".flow"]


def _gen(a):
    fd = exists_with_flow(a.v, a.lam, a.max_width, Budget(seconds=a.timeout), a.seed)
    return CommandResult(OK, _write_flowed(fd, a.out), fd.width, fd.provenance)


def _verify(a):
    design, flow, _ = _load_flowed(a.design, a.flow)
    report = verify_flow(design, flow)
    if report.valid:
        return CommandResult(OK, [], report.width, "valid")
    return CommandResult(NEGATIVE, [], None, f"not zero-sum at {report.violations[:5]}")


def _search(a):
    design, _ = parse_design_ordered(read_text(a.design))
    f = search_flow(design, a.width, Budget(seconds=a.timeout))
    if f is None:
        return CommandResult(NEGATIVE, [], None, f"no flow of width {a.width}")
    files = []
    if a.out:
        write_text(a.out, format_flow(f, f"search width={a.width}"))
        files = [a.out]
    return CommandResult(OK, files, f.width, " ".join(map(str, f.weights)))


def _double(a):
    design, flow, prov = _load_flowed(a.design, a.flow)
    if not verify_flow(design, flow).valid:
        raise InvalidCertificate("the base flow is not zero-sum")
    wf = parse_factorization(read_text(a.factorization))
    base = FlowedDesign(design, flow, flow.width, prov or "file")
    fd = double_sts(base, wf)
    return CommandResult(OK, _write_flowed(fd, a.out), fd.width, fd.provenance)


_FAMILIES = {
    "knn": (knn_null, "K_{{n,n}} n={}"),
    "k4r": (lambda r: kn_3null(4 * r), "K_{{4r}} r={}"),
    "k6k4": (k6k4_4null, "K_{{6k+4}} k={}"),
    "k4k2": (k4k2_5null, "K_{{4k+2}} k={}"),
}


def _factorize(a):
    build, tag = _FAMILIES[a.family]
    wf = build(a.param)
    if not verify_null_factorization(wf, wf.width).valid:
        raise InvalidCertificate("constructed factorization failed verification")
    write_text(a.out, format_factorization(wf, f"{a.family} " + tag.format(a.param)))
    return CommandResult(OK, [a.out], wf.width, "")


def _bound(a):
    design, _ = parse_design_ordered(read_text(a.design))
    sol = bound_flow(design)
    write_text(a.out, format_flow(sol.flow, f"bound t={sol.t} scale={sol.scale}"))
    return CommandResult(OK, [a.out], sol.flow.width, "")


def _batch_one(args):
    v, lam, max_width, seed = args
    try:
        fd = exists_with_flow(v, lam, max_width, seed=seed)
        return v, lam, OK, fd.width, fd.provenance
    except NoFlowExists as exc:
        return v, lam, NEGATIVE, None, str(exc)
    except (NotAchieved, Unsupported, SearchTimeout) as exc:
        return v, lam, GAVE_UP, None, str(exc)


def _batch(a):
    grid = [(v, lam, a.max_width, a.seed)
            for v in range(3, a.vmax + 1) for lam in range(1, a.lmax + 1)
            if check_admissible(v, lam)]
    if a.jobs > 1:
        with ProcessPoolExecutor(a.jobs) as pool:
            rows = list(pool.map(_batch_one, grid))  # map keeps grid order
    else:
        rows = [_batch_one(x) for x in grid]
    lines = [f"{v} {lam} {code} {'-' if w is None else w} {msg}\n" for v, lam, code, w, msg in rows]
    write_text(a.report, "# v lambda status width provenance\n" + "".join(lines))
    worst = max((r[2] for r in rows), default=OK)
    widths = [r[3] for r in rows if r[3] is not None]
    return CommandResult(GAVE_UP if worst == GAVE_UP else OK, [a.report],
                         max(widths, default=None), f"{len(rows)} pairs")


_COMMANDS = {
    "gen": _gen, "verify": _verify, "search": _search, "double": _double,
    "factorize": _factorize, "bound": _bound, "batch": _batch,
}


def run(argv) -> CommandResult:
    try:
        a = _parser().parse_args(list(argv))
    except _UsageError as exc:
        return CommandResult(USAGE, message=str(exc))
    try:
        return _COMMANDS[a.cmd](a)
    except (OSError, FormatError) as exc:
        return CommandResult(USAGE, message=str(exc))
    except (NoDesign, NoFlowExists, InvalidCertificate, FactorCountMismatch, LengthMismatch) as exc:
        return CommandResult(NEGATIVE, message=f"{type(exc).__name__}: {exc}")
    except (SearchTimeout, NotAchieved, Unsupported, DegenerateOrder, BadOrder) as exc:
        return CommandResult(GAVE_UP, message=f"{type(exc).__name__}: {exc}")
    except TSFlowError as exc:
        # malformed designs and similar input problems are invalid certificates
        return CommandResult(NEGATIVE, message=f"{type(exc).__name__}: {exc}")
    except ValueError as exc:
        return CommandResult(USAGE, message=str(exc))


def main(argv=None) -> int:
    result = run(sys.argv[1:] if argv is None else argv)
    if result.message:
        print(result.message, file=sys.stderr)
    print(result.summary)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
