from __future__ import annotations

import subprocess
import sys

import pytest

from qgk import bilform
from qgk.cli import Report, detect_kind, main
from qgk.graphs import graph_bilinear, path_graph


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_graph_check_l3(tmp_path, capsys):
    path = write(tmp_path, "l3.graph", "4\n1 2\n2 3\n3 4\n")
    code, out, _ = run(["graph-check", path], capsys)
    assert code == 0
    assert "forbidden L3 [1 2 3 4]; common-slot: false" in out.splitlines()


def test_graph_check_k3_and_vertex(tmp_path, capsys):
    code, out, _ = run(["graph-check", write(tmp_path, "k3.graph", "3\n1 2\n1 3\n2 3\n")], capsys)
    assert code == 0 and "tree: (* (* (v 3) 2) 1); common-slot: true" in out
    code, out, _ = run(["graph-check", write(tmp_path, "v.graph", "1\n")], capsys)
    assert "tree: (v 1); common-slot: true" in out


def test_graph_check_odd_prime_only_reports(tmp_path, capsys):
    path = write(tmp_path, "c4.graph", "4\n1 2\n2 3\n3 4\n1 4\n")
    code, out, _ = run(["graph-check", path, "--p", "3", "--format", "tsv"], capsys)
    assert code == 0
    assert "INFO\t-\tforbidden C4 [1 2 3 4]; common-slot: false" in out.splitlines()


def test_parse_error_exit_code(tmp_path, capsys):
    code, _, err = run(["graph-check", write(tmp_path, "bad.graph", "3\n1 9\n")], capsys)
    assert code == 2 and "line 2" in err


def test_emit_sources_agree(tmp_path, capsys):
    g = write(tmp_path, "k2.graph", "2\n1 2\n")
    pr = write(tmp_path, "k2.pres", "gens x1 x2 ;\nrel [x1,x2] ;\n")
    tr = write(tmp_path, "k2.tree", "(* (v 1) 2)\n")
    outs = []
    for src in (g, pr, tr):
        dest = str(tmp_path / (src.rsplit("/", 1)[-1] + ".bil"))
        code, _, _ = run(["emit", src, "--out", dest], capsys)
        assert code == 0
        outs.append(open(dest).read())
    assert outs[0] == outs[1] == outs[2]


def test_emit_l3_to_stdout(tmp_path, capsys):
    code, out, _ = run(["emit", write(tmp_path, "l3", "4\n1 2\n2 3\n3 4\n")], capsys)
    M = bilform.loads(out)
    assert code == 0 and (M.n, M.m) == (4, 3)


def test_detect_kind():
    assert detect_kind("x", "# c\ngens a ;") == "presentation"
    assert detect_kind("x", "(v 1)") == "tree"
    assert detect_kind("x", "p 2\n") == "map"
    assert detect_kind("x", "3\n") == "graph"
    assert detect_kind("x.tree", "3\n") == "tree"


def test_slot_command(tmp_path, capsys):
    path = write(tmp_path, "l3.bil", bilform.dumps(graph_bilinear(path_graph(4), 2)))
    code, out, _ = run(["slot", path], capsys)
    assert code == 0
    assert "common-slot: false; witness" in out
    assert "quaternionic axiom 4: fails" in out
    edgeless = write(tmp_path, "e.bil", bilform.dumps(bilform.AugBilinearMap.zero(3, 2)))
    code, out, _ = run(["slot", edgeless], capsys)
    assert "common-slot: true" in out


def test_slot_rejects_invalid_map(tmp_path, capsys):
    bad = write(tmp_path, "bad.bil", "p 3\ndimV 1\ndimW 0\neps 1\nb 1 1\n")
    code, _, err = run(["slot", bad], capsys)
    assert code == 2 and "EpsOrder" in err


@pytest.mark.parametrize(
    "graph, line",
    [("2\n1 2\n", "hull 1 2 1 0"), ("3\n1 2\n1 3\n2 3\n", "hull 1 3 3 1"), ("1\n", "hull 1 1 0 0")],
)
def test_hull_command(tmp_path, capsys, graph, line):
    g = write(tmp_path, "g.graph", graph)
    m = str(tmp_path / "g.bil")
    run(["emit", g, "--out", m], capsys)
    code, out, _ = run(["hull", m], capsys)
    assert code == 0 and line in out.splitlines() and "F(G(b)) ~ b: yes" in out


def test_hull_guard(tmp_path, capsys):
    m = write(tmp_path, "big.bil", bilform.dumps(bilform.AugBilinearMap.zero(2, 9, 1)))
    code, _, err = run(["hull", m], capsys)
    assert code == 2 and "guard" in err


def test_verify_small_tsv(capsys):
    code, out, _ = run(["verify", "--nmax", "3", "--p", "5", "--format", "tsv"], capsys)
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "status\tkey\ttext"
    assert any(ln.startswith("PASS\t4\t") for ln in lines)
    assert lines[-1] == "SUMMARY\t-\t1 passed, 0 failed, 0 skipped"


def test_report_exit_code():
    r = Report("x")
    r.add("PASS", "a")
    assert r.exit_code == 0
    r.add("FAIL", "b")
    assert r.exit_code == 1 and "1 failed" in r.render()


def test_bad_prime_rejected(capsys):
    with pytest.raises(SystemExit):
        main(["verify", "--p", "4"])


def test_console_entry_point(tmp_path):
    g = write(tmp_path, "k2.graph", "2\n1 2\n")
    out = subprocess.run([sys.executable, "-m", "qgk", "graph-check", g], capture_output=True, text=True)
    assert out.returncode == 0 and "common-slot: true" in out.stdout
