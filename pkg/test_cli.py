"""
Tests for the command-line front end and its exit codes
"""
import pytest

from main import EXIT_DOMAIN, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gen(capsys):
    code, out, _ = run(capsys, "gen", "thm3", "9")
    assert code == EXIT_OK
    assert any(line.startswith("name ") for line in out.splitlines())
    assert out.count("\ntile ") == 4


def test_gen_is_deterministic(capsys):
    _, first, _ = run(capsys, "gen", "thm3", "9")
    _, second, _ = run(capsys, "gen", "thm3", "9")
    assert first == second


def test_gen_constraint_violation(capsys):
    code, _, err = run(capsys, "gen", "thm3", "8")
    assert code == EXIT_DOMAIN
    assert "ParameterConstraintViolated" in err


def test_usage_error(capsys):
    code, _, _ = run(capsys, "gen", "--bogus")
    assert code == EXIT_USAGE


def test_gen_then_unfold(capsys, tmp_path):
    path = tmp_path / "iso9.garage"
    assert run(capsys, "gen", "veech-isosceles", "9", "-o", str(path))[0] == EXIT_OK
    code, out, _ = run(capsys, "unfold", str(path))
    assert code == EXIT_OK
    assert "genus = 4" in out.splitlines()
    assert "faces = 18" in out.splitlines()


def test_unfold_builtin(capsys, tmp_path):
    svg = tmp_path / "torus.svg"
    code, out, _ = run(capsys, "unfold", "torus", "--svg", str(svg))
    assert code == EXIT_OK
    assert "genus = 1" in out.splitlines()
    drawing = svg.read_text()
    assert drawing.lstrip().startswith("<svg")
    # two glued edge pairs, each labelled on both of its edges
    assert drawing.count('class="pairing"') == 4
    assert drawing.count(">e0<") == 2 and drawing.count(">e1<") == 2


def test_trace(capsys):
    code, out, _ = run(capsys, "trace", "torus", "--start", "0.5,0.5", "--dir", "1,0", "--len", "5")
    assert code == EXIT_OK
    assert "termination = closed" in out.splitlines()


def test_trace_billiard(capsys, tmp_path):
    path = tmp_path / "iso5.garage"
    run(capsys, "gen", "veech-isosceles", "5", "-o", str(path))
    code, out, _ = run(capsys, "trace", str(path), "--start", "0.5,0.05", "--dir", "0.3,1",
                       "--billiard", "--bounces", "20")
    assert code == EXIT_OK
    assert any(line.startswith("bounces = ") for line in out.splitlines())


def test_bad_pair(capsys):
    code, _, _ = run(capsys, "trace", "torus", "--start", "half", "--dir", "1,0")
    assert code == EXIT_USAGE


def test_sc(capsys):
    code, out, _ = run(capsys, "sc", "torus", "--lmax", "2.5")
    assert code == EXIT_OK
    assert "count = 16" in out.splitlines()


def test_repro(capsys):
    code, out, _ = run(capsys, "repro", "thm3", "9")
    assert code == EXIT_OK
    assert out.splitlines()[-1] == "PASS"


@pytest.mark.slow
def test_repro_ward(capsys):
    code, out, _ = run(capsys, "repro", "ward-impossibility", "7")
    assert code == EXIT_OK
    assert out.splitlines()[-1] == "PASS"


def test_cover_screen_from_files(capsys, tmp_path):
    p, q = tmp_path / "iso9.garage", tmp_path / "thm3_9.garage"
    run(capsys, "gen", "veech-isosceles", "9", "-o", str(p))
    run(capsys, "gen", "thm3", "9", "-o", str(q))
    code, out, _ = run(capsys, "cover", str(p), str(q), "--screen")
    lines = out.splitlines()
    assert code == EXIT_OK
    assert "degree = 4" in lines
    assert "overall = suitable-candidate" in lines


def test_cover_mismatch(capsys, tmp_path):
    p, q = tmp_path / "iso5.garage", tmp_path / "thm3_9.garage"
    run(capsys, "gen", "veech-isosceles", "5", "-o", str(p))
    run(capsys, "gen", "thm3", "9", "-o", str(q))
    code, _, err = run(capsys, "cover", str(p), str(q))
    assert code == EXIT_DOMAIN
    assert "GeometryMismatch" in err


def test_missing_file(capsys, tmp_path):
    missing = tmp_path / "nowhere.garage"
    code, _, err = run(capsys, "unfold", str(missing))
    assert code == EXIT_USAGE
    assert "nowhere.garage" in err
    assert "Traceback" not in err
