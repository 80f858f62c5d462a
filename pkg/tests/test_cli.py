import subprocess
import sys

import pytest

from sparsehom.cli import run
from sparsehom.graph import cycle, dump_edge_list, load_edge_list


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return _write


K4 = "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n"


def test_count_sub(write, capsys, tmp_path):
    host = write("k4.txt", K4)
    for mode in ("const-space", "poly-space"):
        assert run(["count-sub", "--pattern", "cycle:4", "--host", host, "--mode", mode,
                    "--threads", "1", "--cache-dir", str(tmp_path / "c")]) == 0
        assert capsys.readouterr().out == "3\n"
    pattern = write("p3.txt", "7 8\n8 9\n")
    assert run(["count-sub", "--pattern", pattern, "--host", host, "--no-cache", "--threads", "1"]) == 0
    assert capsys.readouterr().out == "12\n"


def test_count_hom(write, capsys):
    host = write("k4.txt", K4)
    assert run(["count-hom", "--pattern", "path:2", "--host", host]) == 0
    assert capsys.readouterr().out == "12\n"


def test_detect_exit_codes(write, capsys):
    c6 = write("c6.txt", dump_edge_list(cycle(6)))
    assert run(["detect-induced", "--pattern", "c6", "--host", c6]) == 0
    assert capsys.readouterr().out == "found\n"
    k4 = write("k4.txt", K4)
    assert run(["detect-induced", "--pattern", "c6", "--host", k4, "--seed", "random"]) == 1
    assert capsys.readouterr().out == "not-found\n"


def test_spasm_listing(capsys, tmp_path):
    out = tmp_path / "c4.spasm"
    assert run(["spasm", "--pattern", "cycle:4", "--attach", "mtd:4", "--out", str(out)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert [line.split("\t")[1] for line in lines] == ["1/8", "-1/4", "1/8"]
    assert out.read_text().startswith("spasm-cache version=1")
    assert run(["spasm", "--pattern", "cycle:5", "--attach", "mtw:2"]) == 1
    assert "no mtw witness" in capsys.readouterr().err


def test_analyze(capsys):
    assert run(["analyze", "--graph", "cycle:5", "--param", "mtw"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "3" and out[1].startswith("treedecomp n=5")
    assert run(["analyze", "--graph", "cycle:4", "--param", "mtd"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "4" and out[1].startswith("elimtree")


def test_generator_plants_an_induced_copy(capsys):
    from sparsehom.oracle import oracle_induced_exists

    assert run(["gen", "--kind", "cycle:6", "--n", "12", "--m", "10", "--seed", "3"]) == 0
    h = load_edge_list(capsys.readouterr().out)
    assert oracle_induced_exists(cycle(6), h)
    assert run(["gen", "--n", "5", "--m", "11"]) == 2


@pytest.mark.parametrize("argv", [
    ["count-sub", "--pattern", "cycle:2", "--host", "-"],
    ["count-sub", "--pattern", "cycle:4", "--host", "/nonexistent"],
    ["detect-induced", "--pattern", "cycle:5", "--host", "/nonexistent"],
    ["detect-induced", "--pattern", "c6", "--host", "-", "--seed", "soon"],
    ["spasm", "--pattern", "cycle:4", "--attach", "depth:3"],
])
def test_input_errors(argv, capsys, monkeypatch):
    import io

    monkeypatch.setattr(sys, "stdin", io.TextIOWrapper(io.BytesIO(K4.encode())))
    assert run(argv) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_malformed_host_on_stdin(monkeypatch, capsys):
    import io

    monkeypatch.setattr(sys, "stdin", io.TextIOWrapper(io.BytesIO(b"4 4\n")))
    assert run(["count-hom", "--pattern", "path:2", "--host", "-"]) == 2
    assert "self-loop" in capsys.readouterr().err


def test_non_integral_exit_code(monkeypatch, write, capsys):
    from sparsehom import cli
    from sparsehom.patterns import NonIntegralCount

    def broken(*a, **k):
        raise NonIntegralCount("7/2")

    monkeypatch.setattr(cli, "count_subgraphs", broken)
    assert run(["count-sub", "--pattern", "cycle:4", "--host", write("k4.txt", K4), "--no-cache"]) == 3


def test_module_entry_point_and_help():
    out = subprocess.run([sys.executable, "-m", "sparsehom", "--help"], capture_output=True, text=True)
    assert out.returncode == 0
    assert "count-sub" in out.stdout and "detect-induced" in out.stdout
    assert not any(line.split()[:1] == ["gen"] for line in out.stdout.splitlines())
