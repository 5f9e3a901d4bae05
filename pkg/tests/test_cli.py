import csv
import io

import pytest

from hcglauber.cli import main

TWO_TRIANGLES = "6 6\n0 1\n1 2\n0 2\n3 4\n4 5\n3 5\n"
P3 = "3 2\n0 1\n1 2\n"


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return write


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return {r["quantity"]: r for r in csv.DictReader(io.StringIO(text))}


def test_z(files, capsys):
    g = files("g.txt", TWO_TRIANGLES)
    assert run(["z", "--graph", g, "--lambda", "1"], capsys)[:2] == (0, "16\n")
    code, out, _ = run(["z", "--graph", g, "--lambda", "1", "--method", "tree_dp"], capsys)
    assert out == "16\n"


def test_pv(files, capsys):
    g = files("p3.txt", P3)
    code, out, _ = run(["pv", "--graph", g, "--lambda", "1"], capsys)
    assert code == 0
    assert out.splitlines()[1:] == ["0,2,5,0.4", "1,1,5,0.2", "2,2,5,0.4"]


def test_mix_single_vertex(files, capsys):
    g = files("one.txt", "1 0\n")
    code, out, _ = run(["mix", "--graph", g, "--lambda", "1"], capsys)
    assert code == 0 and out.splitlines()[0] == "tau=1"
    table = rows("\n".join(out.splitlines()[1:]))
    assert table["phi"]["num"] == "1" and table["phi"]["den"] == "2"


def test_gen_and_manifest(tmp_path, capsys):
    out = tmp_path / "k33.txt"
    code, _, _ = run(["gen", "--family", "complete_bipartite", "--t", "3", "--out", str(out)], capsys)
    assert code == 0
    lines = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    assert lines[0] == "6 9"
    manifest = (tmp_path / "k33.txt.manifest").read_text()
    assert "gen" in manifest


def test_decomp_then_congestion(files, tmp_path, capsys):
    g = files("p3.txt", P3)
    d = str(tmp_path / "d.txt")
    assert run(["decomp", "--graph", g, "--kind", "septree", "--out", d], capsys)[0] == 0
    code, out, _ = run(["congestion", "--graph", g, "--lambda", "1", "--decomposition", d, "--kind", "septree", "--with-tau"], capsys)
    assert code == 0
    assert out.splitlines()[0] == "from_index,to_index,move,rho_num,rho_den,rho_double"
    assert any(l.startswith("# tau_upper") for l in out.splitlines())


def test_congestion_kind_mismatch(files, tmp_path, capsys):
    g = files("p3.txt", P3)
    d = files("d.txt", "path 2\n0 1\n1 2\n")
    code, _, err = run(["congestion", "--graph", g, "--lambda", "1", "--decomposition", d, "--kind", "septree"], capsys)
    assert code == 2 and err.startswith("error: invalid-input:")


def test_lowerbound(capsys):
    code, out, _ = run(["lowerbound", "--family", "complete_bipartite", "--t", "2", "--lambda", "1", "--with-tau"], capsys)
    table = rows(out)
    assert code == 0
    assert table["ratio"]["num"] == "3" and table["tau_exact"]["num"] == "12"


def test_sample(files, capsys):
    g = files("p3.txt", P3)
    code, out, _ = run(["sample", "--graph", g, "--lambda", "1", "--steps", "2000", "--seed", "4"], capsys)
    assert code == 0 and len(out.splitlines()) == 4
    again = run(["sample", "--graph", g, "--lambda", "1", "--steps", "2000", "--seed", "4"], capsys)[1]
    assert again == out


@pytest.mark.parametrize(
    "argv,code,kind",
    [
        (["z", "--graph", "/nonexistent", "--lambda", "1"], 2, "invalid-input"),
        (["z", "--graph", "{g}", "--lambda", "0"], 2, "invalid-input"),
        (["z", "--graph", "{g}", "--lambda", "abc"], 2, "invalid-input"),
        (["pv", "--graph", "{g}", "--lambda", "1", "--max-states", "2"], 3, "budget-exceeded"),
        (["z", "--graph", "{g}", "--lambda", "1", "--max-n", "2"], 3, "budget-exceeded"),
        (["bogus"], 2, "invalid-input"),
        (["sample", "--graph", "{g}", "--lambda", "1"], 2, "invalid-input"),
    ],
)
def test_errors(files, capsys, argv, code, kind):
    g = files("p3.txt", P3)
    got, out, err = run([a.replace("{g}", g) for a in argv], capsys)
    assert got == code
    assert err.count("\n") == 1 and err.startswith(f"error: {kind}:")
