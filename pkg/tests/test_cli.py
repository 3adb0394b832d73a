import json
import subprocess
import sys
from pathlib import Path

import pytest

from lscnets.cli import main
from lscnets.nets import loads, net_iso

FIXTURES = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse(capsys):
    code, out, _ = run(capsys, "parse", r"(\x. x x) y")
    assert code == 0 and out.strip() == r"(\x. x x) y"
    code, out, _ = run(capsys, "parse", "--json", "x[x<-y]")
    assert json.loads(out)["free"] == ["y"]


def test_parse_error_is_usage_error(capsys):
    code, _, err = run(capsys, "parse", "x [")
    assert code == 2 and "parse error" in err


def test_unknown_command_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_translate_check_readback(tmp_path, capsys):
    f = tmp_path / "net.json"
    assert run(capsys, "translate", r"(\y.x)[x<-z]", "--weaken", "w", "-o", str(f))[0] == 0
    P = loads(f.read_text())
    assert P.free_vars == {"w", "z"}
    code, out, _ = run(capsys, "check", str(f))
    assert code == 0 and "valid" in out
    code, out, _ = run(capsys, "check", "--correctness", str(f))
    assert code == 0 and out.strip() == "correct"
    code, out, _ = run(capsys, "readback", "--all", str(f))
    assert code == 0 and len(out.splitlines()) == 2


def test_check_cyclic_fixture(capsys):
    path = str(FIXTURES / "cyclic_box.json")
    assert run(capsys, "check", path)[0] == 0
    code, out, _ = run(capsys, "check", "--correctness", path)
    assert code == 1 and "acyclicity" in out
    code, out, _ = run(capsys, "readback", path)
    assert code == 1


def test_check_malformed(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text("{")
    assert run(capsys, "check", str(f))[0] == 2
    assert run(capsys, "check", str(tmp_path / "missing.json"))[0] == 2


def test_reduce_term(capsys):
    code, out, err = run(capsys, "reduce", "--trace", r"(\x.x) y")
    assert code == 0
    lines = out.splitlines()
    assert lines[-1] == "y" and len(lines) == 4
    code, _, _ = run(capsys, "reduce", "--fuel", "10", r"(\x. x x) (\y. y y)")
    assert code == 1


def test_reduce_net(tmp_path, capsys):
    f = tmp_path / "net.json"
    run(capsys, "translate", r"(\x.x) y", "-o", str(f))
    code, out, _ = run(capsys, "reduce", "--side", "net", str(f))
    lines = out.splitlines()
    assert code == 0 and lines[-1] == "y"
    assert [l.split("\t")[0] for l in lines[:-1]] == ["m", "e", "gc"]


def test_equiv(capsys):
    assert run(capsys, "equiv", r"(\y.x)[x<-z]", r"\y. x[x<-z]")[0] == 0
    assert run(capsys, "equiv", "(y x)[x<-z]", "y (x[x<-z])")[0] == 1
    assert run(capsys, "equiv", "--method", "closure", r"(\y.x)[x<-z]", r"\y. x[x<-z]")[0] == 0


def test_export(tmp_path, capsys):
    code, out, _ = run(capsys, "export", "x y")
    assert code == 0 and out.startswith("digraph")
    f = tmp_path / "net.json"
    run(capsys, "translate", "x y", "-o", str(f))
    code, out, _ = run(capsys, "export", "--net-input", "--format", "json", str(f))
    assert net_iso(loads(out), loads(f.read_text())) is not None


def test_corpus(capsys):
    code, out, _ = run(capsys, "corpus", "--max-size", "3", "--pool", "x", "--count")
    assert code == 0 and out.strip() == "9"


def test_suite_and_bisim_check(capsys):
    code, out, _ = run(capsys, "suite", "static", "--max-size", "4", "--json", "--quiet")
    data = json.loads(out)
    assert code == 0 and data["ok"]
    code, out, _ = run(capsys, "bisim-check", "--max-size", "6", "--quiet")
    assert code == 0 and all(line.startswith("[PASS]") for line in out.splitlines()
                             if line.startswith("["))


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lscnets", "parse", "x"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "x"
