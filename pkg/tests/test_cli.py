import json
import subprocess
import sys

import pytest

from copathtw import cli
from copathtw.decomposition import heuristic_decomposition, write_td
from copathtw.graph import write_gr
from copathtw.oracle import complete, cycle, grid


@pytest.fixture
def files(tmp_path):
    def make(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return make


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_decision_c5(files, capsys):
    gr = files("c5.gr", write_gr(cycle(5)))
    code, out, _ = run(capsys, "solve", "--problem", "set", "--graph", gr, "--decision", "1")
    report = json.loads(out)
    assert code == 0
    assert report["verdict"] == "YES" and report["deleted_count"] == 1
    assert list(report) == ["problem", "n", "m", "width", "opt_weight", "kept",
                            "deleted_count", "verdict"]
    code, out, _ = run(capsys, "solve", "--problem", "set", "--graph", gr, "--decision", "0")
    assert json.loads(out)["verdict"] == "NO"


def test_solve_packing_k4(files, capsys):
    gr = files("k4.gr", write_gr(complete(4)))
    code, out, _ = run(capsys, "solve", "--problem", "packing", "--graph", gr, "--emit-solution")
    report = json.loads(out)
    assert code == 0 and report["opt_weight"] == 2
    assert len(report["kept"]) == 2 and all(1 <= v <= 4 for v in report["kept"])


def test_malformed_graph(files, capsys):
    gr = files("bad.gr", "p tw 3 1\n1 x\n")
    code, _, err = run(capsys, "solve", "--problem", "set", "--graph", gr)
    assert code == 2 and "line 2" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "solve", "--problem", "set", "--graph", str(tmp_path / "nope.gr"))
    assert code == 2


def test_given_td_and_invalid_td(files, capsys):
    g = grid(2, 3)
    gr = files("g.gr", write_gr(g))
    td = files("g.td", write_td(heuristic_decomposition(g), g.n))
    code, out, _ = run(capsys, "solve", "--problem", "set", "--graph", gr, "--td", td)
    assert code == 0 and json.loads(out)["opt_weight"] == 5
    bad = files("bad.td", "s td 1 2 6\nb 1 1 2\n")
    code, _, err = run(capsys, "solve", "--problem", "set", "--graph", gr, "--td", bad)
    assert code == 2


def test_weights_and_text_format(files, capsys):
    gr = files("c4.gr", write_gr(cycle(4)))
    w = files("w.txt", "1\n1\n1\n10\n")
    code, out, _ = run(capsys, "solve", "--problem", "set", "--graph", gr, "--weights", w,
                       "--format", "text", "--stats")
    assert code == 0
    assert "opt_weight: 12" in out and "stats:" in out
    bad = files("w2.txt", "1\n2\n")
    code, _, _ = run(capsys, "solve", "--problem", "set", "--graph", gr, "--weights", bad)
    assert code == 2


def test_stats_fields(files, capsys):
    gr = files("g.gr", write_gr(grid(3, 3)))
    code, out, _ = run(capsys, "solve", "--problem", "packing", "--graph", gr, "--stats")
    stats = json.loads(out)["stats"]
    assert stats["size_invariant_violations"] == 0
    assert len(stats["table_sizes"]) == stats["nodes"]


def test_deterministic_output(files, capsys):
    gr = files("g.gr", write_gr(grid(3, 3)))
    args = ("solve", "--problem", "set", "--graph", gr, "--emit-solution", "--seed", "4")
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


def test_thread_env(files, capsys, monkeypatch):
    gr = files("c5.gr", write_gr(cycle(5)))
    monkeypatch.setenv("COPATHTW_THREADS", "lots")
    assert run(capsys, "solve", "--problem", "set", "--graph", gr)[0] == 2
    monkeypatch.setenv("COPATHTW_THREADS", "2")
    assert run(capsys, "solve", "--problem", "set", "--graph", gr)[0] == 0


def test_internal_failure_trap(files, capsys, monkeypatch):
    from copathtw import copath_set
    real = copath_set.solve_set

    def broken(*a, **kw):
        sol = real(*a, **kw)
        sol.opt_weight += 1
        return sol

    monkeypatch.setattr(copath_set, "solve_set", broken)
    gr = files("c5.gr", write_gr(cycle(5)))
    assert run(capsys, "solve", "--problem", "set", "--graph", gr)[0] == 3


def test_verify(files, capsys):
    gr = files("c4.gr", write_gr(cycle(4)))
    good = files("good.json", json.dumps({"opt_weight": 3, "kept": [[1, 2], [2, 3], [3, 4]]}))
    loop = files("loop.json", json.dumps({"opt_weight": 4,
                                          "kept": [[1, 2], [2, 3], [3, 4], [1, 4]]}))
    wrong = files("wrong.json", json.dumps({"opt_weight": 2, "kept": [[1, 2], [2, 3], [3, 4]]}))
    junk = files("junk.json", "{")
    args = ("verify", "--problem", "set", "--graph", gr, "--solution")
    assert run(capsys, *args, good)[0] == 0
    assert run(capsys, *args, loop)[0] == 1
    assert run(capsys, *args, wrong)[0] == 1
    assert run(capsys, *args, junk)[0] == 2


def test_verify_packing_roundtrip(files, capsys):
    gr = files("k4.gr", write_gr(complete(4)))
    _, out, _ = run(capsys, "solve", "--problem", "packing", "--graph", gr, "--emit-solution")
    sol = files("sol.json", out)
    assert run(capsys, "verify", "--problem", "packing", "--graph", gr, "--solution", sol)[0] == 0
    bad = files("bad.json", json.dumps({"opt_weight": 3, "kept": [1, 2, 3]}))
    assert run(capsys, "verify", "--problem", "packing", "--graph", gr, "--solution", bad)[0] == 1


def test_selfcheck_small(capsys):
    code, out, _ = run(capsys, "selfcheck", "--seeds", "20", "--max-n", "4", "--quick")
    assert code == 0 and "[FAIL]" not in out


def test_selfcheck_injected_fault(capsys):
    code, out, _ = run(capsys, "selfcheck", "--seeds", "40", "--quick",
                       "--inject-fault", "drop-empty-bucket")
    assert code == 1 and "[FAIL]" in out and "seed=" in out


def test_module_entry_point(files):
    gr = files("k4.gr", write_gr(complete(4)))
    proc = subprocess.run([sys.executable, "-m", "copathtw", "solve", "--problem", "set",
                           "--graph", gr], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["opt_weight"] == 3
