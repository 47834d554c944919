import pytest

from tsflow.cli import main, run
from tsflow.constructions import exists_with_flow, small_fixed_design
from tsflow.factorizations import k4k2_5null, knn_null, verify_null_factorization
from tsflow.textio import (
    FormatError,
    format_design,
    format_factorization,
    format_flow,
    parse_design,
    parse_design_ordered,
    parse_factorization,
    parse_flow,
    provenance_of,
)


def test_design_round_trip():
    fd = exists_with_flow(13, 2)
    text = format_design(fd.design, fd.provenance)
    assert text.startswith("# provenance: ")
    assert text.splitlines()[1] == "design v=13 lambda=2 k=3 b=52"
    d = parse_design(text)
    assert d == fd.design
    assert format_design(d, provenance_of(text)) == text


def test_flow_round_trip():
    fd = small_fixed_design("TS62")
    text = format_flow(fd.flow)
    assert parse_flow(text) == fd.flow
    assert format_flow(parse_flow(text)) == text


def test_factorization_round_trip():
    wf = k4k2_5null(2)
    text = format_factorization(wf, "k4k2 k=2")
    back = parse_factorization(text)
    assert back.factors == wf.factors and back.weights == wf.weights
    assert verify_null_factorization(back, 5).valid
    assert format_factorization(back, "k4k2 k=2") == text


def test_comments_are_ignored():
    text = "# hello\ndesign v=3 lambda=2 k=3 b=2\n# between\n0 1 2\n0 1 2\n"
    assert parse_design(text).b == 2


def test_unsorted_design_file_keeps_flow_alignment():
    text = "design v=3 lambda=2 k=3 b=2\n2 1 0\n0 1 2\n"
    d, order = parse_design_ordered(text)
    assert d.blocks == ((0, 1, 2), (0, 1, 2)) and sorted(order) == [0, 1]


@pytest.mark.parametrize("text", [
    "",
    "design v=3 lambda=2 k=3\n0 1 2\n",
    "design v=3 lambda=2 k=3 b=3\n0 1 2\n0 1 2\n",
    "design v=3 lambda=2 k=3 b=2\n0 1 x\n0 1 2\n",
])
def test_bad_design_files(text):
    with pytest.raises(FormatError):
        parse_design(text)


def test_bad_factorization_files():
    with pytest.raises(FormatError):
        parse_factorization("graph n=4 edges=1\n0 1 1\n")
    with pytest.raises(FormatError):
        parse_factorization("graph n=4 edges=2\nfactor 0\n0 1 1\n")


def test_gen_sts9(tmp_path):
    out = tmp_path / "s9.design"
    res = run(["gen", "--v", "9", "--lambda", "1", "--out", str(out)])
    assert res.exit_code == 0 and res.width <= 3
    assert res.summary == f"STATUS 0 WIDTH {res.width} FILE {out}"
    assert (tmp_path / "s9.design.flow").exists()
    again = run(["verify", "--design", str(out), "--flow", str(out) + ".flow"])
    assert again.exit_code == 0


def test_gen_fano_is_negative(tmp_path):
    res = run(["gen", "--v", "7", "--lambda", "1", "--out", str(tmp_path / "f.design")])
    assert res.exit_code == 1 and res.summary == "STATUS 1 WIDTH - FILE -"


def test_gen_inadmissible_is_negative(tmp_path):
    assert run(["gen", "--v", "5", "--lambda", "1", "--out", str(tmp_path / "x")]).exit_code == 1


def test_search_ts62(tmp_path):
    path = tmp_path / "ts62.design"
    path.write_text(format_design(small_fixed_design("TS62").design))
    res = run(["search", "--design", str(path), "--width", "3"])
    assert res.exit_code == 1 and res.summary == "STATUS 1 WIDTH - FILE -"
    flow = tmp_path / "ts62.flow"
    res = run(["search", "--design", str(path), "--width", "4", "--out", str(flow)])
    assert res.exit_code == 0 and res.width == 4
    assert run(["verify", "--design", str(path), "--flow", str(flow)]).exit_code == 0


def test_verify_rejects_bad_flow(tmp_path):
    d = tmp_path / "d"
    f = tmp_path / "f"
    d.write_text(format_design(small_fixed_design("TS62").design))
    f.write_text("1\n" * 10)
    assert run(["verify", "--design", str(d), "--flow", str(f)]).exit_code == 1
    f.write_text("1\n-1\n")
    assert run(["verify", "--design", str(d), "--flow", str(f)]).exit_code == 1


def test_double_via_files(tmp_path):
    base = tmp_path / "s15.design"
    fac = tmp_path / "k16.fac"
    out = tmp_path / "s31.design"
    assert run(["gen", "--v", "15", "--lambda", "1", "--out", str(base)]).exit_code == 0
    assert run(["factorize", "--family", "k4r", "--param", "4", "--out", str(fac)]).exit_code == 0
    res = run(["double", "--design", str(base), "--flow", str(base) + ".flow",
               "--factorization", str(fac), "--out", str(out)])
    assert res.exit_code == 0 and res.width == 3
    assert run(["verify", "--design", str(out), "--flow", str(out) + ".flow"]).exit_code == 0


@pytest.mark.parametrize("family,param,width", [("knn", 5, 3), ("k6k4", 2, 4), ("k4k2", 2, 5)])
def test_factorize(tmp_path, family, param, width):
    out = tmp_path / "f.fac"
    res = run(["factorize", "--family", family, "--param", str(param), "--out", str(out)])
    assert res.exit_code == 0 and res.width <= width
    wf = parse_factorization(out.read_text())
    assert verify_null_factorization(wf, width).valid


def test_factorize_bad_param(tmp_path):
    res = run(["factorize", "--family", "knn", "--param", "2", "--out", str(tmp_path / "x")])
    assert res.exit_code == 3


def test_bound(tmp_path):
    d = tmp_path / "s13.design"
    assert run(["gen", "--v", "13", "--lambda", "1", "--out", str(d)]).exit_code == 0
    out = tmp_path / "s13.bound"
    assert run(["bound", "--design", str(d), "--out", str(out)]).exit_code == 0
    assert run(["verify", "--design", str(d), "--flow", str(out)]).exit_code == 0


def test_bound_degenerate(tmp_path):
    d = tmp_path / "ts42.design"
    d.write_text("design v=4 lambda=2 k=3 b=4\n0 1 2\n0 1 3\n0 2 3\n1 2 3\n")
    assert run(["bound", "--design", str(d), "--out", str(tmp_path / "x")]).exit_code == 3


def test_batch(tmp_path):
    rep = tmp_path / "report.txt"
    res = run(["batch", "--vmax", "9", "--lmax", "4", "--report", str(rep)])
    assert res.exit_code == 0
    lines = [ln for ln in rep.read_text().splitlines() if not ln.startswith("#")]
    status = {tuple(map(int, ln.split()[:2])): int(ln.split()[2]) for ln in lines}
    assert status[(7, 1)] == 1 and status[(6, 2)] == 1 and status[(9, 1)] == 0


def test_batch_jobs_match_serial(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    run(["batch", "--vmax", "8", "--lmax", "3", "--report", str(a)])
    run(["--jobs", "2", "batch", "--vmax", "8", "--lmax", "3", "--report", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_usage_errors(tmp_path):
    assert run([]).exit_code == 2
    assert run(["gen", "--v", "9"]).exit_code == 2
    assert run(["verify", "--design", str(tmp_path / "missing"), "--flow", "x"]).exit_code == 2


def test_main_prints_one_summary_line(tmp_path, capsys):
    code = main(["gen", "--v", "13", "--lambda", "1", "--out", str(tmp_path / "s")])
    out = capsys.readouterr().out
    assert code == 0 and out.count("\n") == 1 and out.startswith("STATUS 0 WIDTH 2 FILE ")


def test_rewrite_is_byte_identical(tmp_path):
    out = tmp_path / "t.design"
    run(["gen", "--v", "10", "--lambda", "4", "--out", str(out)])
    text = out.read_text()
    assert format_design(parse_design(text), provenance_of(text)) == text
    flow_text = (tmp_path / "t.design.flow").read_text()
    assert format_flow(parse_flow(flow_text)) == flow_text


def test_knn_file_vertex_range(tmp_path):
    wf = knn_null(4)
    text = format_factorization(wf)
    assert text.splitlines()[0] == f"graph n=8 edges={len(wf.host.edges)}"
