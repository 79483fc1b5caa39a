import csv
import json
import subprocess
import sys

import pytest

from monodual.cli import _values, loglog_slope, main, parse_family
from monodual.structure import format_td, heuristic_td

from helpers import ACYCLIC, PHI3


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_dualize_streams_in_key_order(files, capsys):
    f = files("s3.hg", "1 2\n1 3\n2 3 4\n1 4\n")
    code, out, err = run(capsys, "dualize", f, "--ordering", "identity")
    assert code == 0
    assert out.splitlines() == ["2 3 4", "1 4", "1 3", "1 2"]
    rep = json.loads(err)
    assert rep["outputs"] == 4 and rep["read"] == 3 and rep["degeneracy"] == 2


def test_dualize_example_and_empty(files, capsys):
    code, out, _ = run(capsys, "dualize", files("a.hg", "2\n1 3\n1 4\n"), "--ordering", "identity",
                       "--report", "none")
    assert out.splitlines() == ["2 3 4", "1 2"]
    code, out, _ = run(capsys, "dualize", files("e.hg", "# nothing\n"), "--report", "none")
    assert code == 0 and out == "\n"


def test_dualize_handles_unused_and_redundant(files, capsys):
    f = files("u.hg", "p mhg 6 3\n2 5\n2 5 6\n5 6\n")
    code, out, _ = run(capsys, "dualize", f, "--report", "none", "--buffer")
    assert sorted(out.splitlines()) == ["2 6", "5"]


@pytest.mark.parametrize("ordering", ["smallest-last", "gyo", "given:6,5,4,3,2,1", "identity"])
def test_dualize_orderings(files, capsys, ordering):
    f = files("acyc.hg", "1 2 3\n1 3 5\n1 5 6\n3 4 5\n")
    code, out, _ = run(capsys, "dualize", f, "--ordering", ordering, "--report", "none")
    assert code == 0
    from monodual.oracle import brute_transversals
    assert {frozenset(map(int, ln.split())) for ln in out.splitlines()} == brute_transversals(ACYCLIC)


def test_dualize_td_ordering_and_report_file(files, capsys, tmp_path):
    f = files("s3.hg", "1 2\n1 3\n2 3 4\n1 4\n")
    td = files("s3.td", format_td(heuristic_td(PHI3)))
    rep = tmp_path / "rep.json"
    code, out, err = run(capsys, "dualize", f, "--ordering", f"td:{td}", "--report", str(rep))
    assert code == 0 and err == "" and len(out.splitlines()) == 4
    assert json.loads(rep.read_text())["outputs"] == 4


def test_dualize_errors(files, capsys):
    code, _, err = run(capsys, "dualize", files("b.hg", "1 2\n2 x\n"))
    assert code == 2 and ":2:" in err
    code, _, err = run(capsys, "dualize", files("t.hg", "1 2\n2 3\n1 3\n"), "--ordering", "gyo")
    assert code == 2 and "alpha-acyclic" in err
    code, _, _ = run(capsys, "dualize", files("g.hg", "1 2\n"), "--ordering", "given:1,1")
    assert code == 2
    code, _, _ = run(capsys, "dualize", files("g2.hg", "1 2\n"), "--ordering", "bogus")
    assert code == 2
    code, _, err = run(capsys, "dualize", files("r.hg", "1 2\n2 3\n"), "--strategy", "recursive",
                       "--budget", "1", "--report", "none")
    assert code == 3 and "budget" in err


def test_check_and_verify(files, capsys, tmp_path):
    phi, psi = files("p.hg", "2\n1 3\n1 4\n"), files("q.hg", "1 2\n2 3 4\n")
    assert run(capsys, "check", phi, psi)[:2] == (0, "DUAL\n")
    assert run(capsys, "check", phi, psi, "--algorithm", "A")[:2] == (0, "DUAL\n")
    x = files("x.hg", "1\n2\n")
    assert run(capsys, "check", x, x)[:2] == (1, "NOT-DUAL\n10\n")
    a, b = files("a.hg", "1 2\n3 4\n"), files("b.hg", "1 3\n2 4\n")
    cert = tmp_path / "c.txt"
    code, out, _ = run(capsys, "check", a, b, "--emit-cert", str(cert))
    assert code == 1 and out.startswith("NOT-DUAL")
    code, out, _ = run(capsys, "verify", a, b, str(cert))
    assert code == 0 and out.splitlines()[0] == "CONFIRMED"
    # same certificate against the dual pair
    assert run(capsys, "verify", phi, psi, str(cert))[0] == 1
    cert.write_text(cert.read_text().replace("A:0", "A:7"))
    assert run(capsys, "verify", a, b, str(cert))[0] == 1
    cert.write_text("garbage\n")
    assert run(capsys, "verify", a, b, str(cert))[0] == 2
    assert run(capsys, "check", a, b, "--algorithm", "A", "--emit-cert", str(cert))[0] == 2
    assert run(capsys, "check", a, files("bad.hg", "z\n"))[0] == 2


def test_check_report(files, capsys):
    x = files("x.hg", "1\n2\n")
    code, out, err = run(capsys, "check", x, x, "--report", "-")
    assert json.loads(err)["algorithm"] == "B"


def test_analyze(files, capsys):
    code, out, _ = run(capsys, "analyze", files("a.hg", "1 2 3\n1 3 5\n1 5 6\n3 4 5\n"))
    assert code == 0
    assert "alpha-acyclic: yes" in out and "degeneracy: 1" in out
    assert "gyo-ordering:" in out and "ordering: gyo" in out
    code, out, _ = run(capsys, "analyze", files("t.hg", "1 2\n2 3\n1 3\n"))
    assert "alpha-acyclic: no" in out and "degeneracy: 2" in out
    code, out, _ = run(capsys, "analyze", files("s.hg", "1 2\n1 3\n1 4\n1 5\n1 6\n"))
    assert "read: 5" in out
    td = files("s3.td", format_td(heuristic_td(PHI3)))
    code, out, _ = run(capsys, "analyze", files("s3.hg", "1 2\n1 3\n2 3 4\n1 4\n"), "--td", td)
    assert "td-width:" in out
    assert run(capsys, "analyze", files("b.hg", "1 -2\n"))[0] == 2


def test_bench(files, capsys, tmp_path):
    out_csv = tmp_path / "b.csv"
    code, out, _ = run(capsys, "bench", "read-k:k=2;n=8,16", str(out_csv), "--seed", "3")
    assert code == 0 and "slope" in out
    rows = list(csv.DictReader(out_csv.open()))
    assert [r["param"] for r in rows] == ["8", "16"]
    assert rows[0]["outputs"] == "8"  # 2 * (8/4)^2
    first = [(r["n"], r["m"], r["outputs"], r["seed"]) for r in rows]
    run(capsys, "bench", "read-k:k=2;n=8,16", str(out_csv), "--seed", "3")
    assert [(r["n"], r["m"], r["outputs"], r["seed"]) for r in csv.DictReader(out_csv.open())] == first
    single = files("one.hg", "1 2\n")
    code, out, _ = run(capsys, "bench", f"single:file={single}", str(out_csv))
    assert code == 0 and len(list(csv.DictReader(out_csv.open()))) == 1
    for spec in ("acyclic:m=3,6", "degenerate:k=2;n=6", "random:n=6;m=5"):
        assert run(capsys, "bench", spec, str(out_csv))[0] == 0
    assert run(capsys, "bench", "nope:n=3", str(out_csv))[0] == 2
    assert run(capsys, "bench", "read-k:k=2", str(out_csv))[0] == 2


def test_family_spec_values():
    assert _values("8..64x2") == [8, 16, 32, 64]
    assert _values("3..5,9") == [3, 4, 5, 9]
    name, params = parse_family("read-k:k=3;n=8..16x2;reps=2")
    assert name == "read-k" and params == {"k": 3, "n": [8, 16], "reps": 2}
    with pytest.raises(ValueError):
        parse_family("read-k:k")
    assert loglog_slope([1, 2, 4], [1, 4, 16]) == pytest.approx(2.0)


def test_console_entry_point(files):
    f = files("s3.hg", "1 2\n1 3\n2 3 4\n1 4\n")
    res = subprocess.run([sys.executable, "-m", "monodual.cli", "dualize", f, "--ordering", "identity",
                          "--report", "none"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.splitlines()[0] == "2 3 4"
