# cyclecover/tests/test_cli.py

import json

import pytest

from cyclecover.formats import read_instance, read_partition
from cyclecover.main import EXIT_FAILED, EXIT_INPUT, EXIT_OK, main


@pytest.fixture
def tri_file(tmp_path):
    path = tmp_path / "tri.txt"
    assert main(["gen", "tri", "--sizes", "2,2,2", "--out", str(path)]) == EXIT_OK
    return path


def test_gen_solve_verify(tri_file, tmp_path, capsys):
    """✅ gen -> solve -> verify round trip on the three-part configuration."""
    part = tmp_path / "part.txt"
    assert main(["solve", "two-local", "--in", str(tri_file), "--out", str(part)]) == EXIT_OK
    assert "cycles=2 valid=True" in part.read_text(encoding="utf-8")
    assert len(read_partition(part).cycles) == 2

    capsys.readouterr()
    code = main(["verify", "--in", str(tri_file), "--partition", str(part), "--distinct", "--max-cycles", "2"])
    assert code == EXIT_OK
    assert capsys.readouterr().out.strip() == "cycles=2 valid=True"


def test_gen_sizes_accept_spaces(tmp_path):
    """✅ --sizes takes a,b,c or a b c."""
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert main(["gen", "tri", "--sizes", "1,2,3", "--out", str(a)]) == EXIT_OK
    assert main(["gen", "tri", "--sizes", "1", "2", "3", "--out", str(b)]) == EXIT_OK
    assert read_instance(a) == read_instance(b)


def test_solve_prints_trace(tri_file, capsys):
    """✅ --trace writes solver stages to stderr."""
    assert main(["solve", "r-local", "--in", str(tri_file), "--r", "2", "--trace"]) == EXIT_OK
    captured = capsys.readouterr()
    assert "valid=True" in captured.out
    assert "[tk]" in captured.err


def test_solve_pipeline_flags(tmp_path, capsys):
    """✅ --tk-min and --ratio-exp reach the r-local pipeline."""
    tk = tmp_path / "tk.txt"
    assert main(["gen", "tk", "--k", "4", "--out", str(tk)]) == EXIT_OK
    capsys.readouterr()
    argv = ["solve", "r-local", "--in", str(tk), "--r", "2", "--trace"]
    assert main(argv + ["--tk-min", "3", "--ratio-exp", "5"]) == EXIT_OK
    captured = capsys.readouterr()
    assert "valid=True" in captured.out
    assert "triangle cycle found" in captured.err

    # K_8 has no triangle cycle with five ring vertices
    assert main(argv + ["--tk-min", "5", "--ratio-exp", "5"]) == EXIT_OK
    captured = capsys.readouterr()
    assert "valid=True" in captured.out
    assert "k_min=5" in captured.err


@pytest.mark.parametrize("flags", [["--tk-min", "2"], ["--ratio-exp", "0"]])
def test_solve_pipeline_flags_validated(tri_file, flags):
    """❌ tk-min below 3 or a non-positive gate exponent exits 2."""
    assert main(["solve", "r-local", "--in", str(tri_file), "--r", "2", *flags]) == EXIT_INPUT


def test_oracle_min(tri_file, capsys):
    """✅ The (2,2,2) configuration needs exactly two cycles."""
    assert main(["oracle", "min", "--in", str(tri_file)]) == EXIT_OK
    assert capsys.readouterr().out.endswith("min=2\n")


def test_oracle_robust(tmp_path, capsys):
    """❌ A monochromatic K_4 is not robust for two cycles."""
    path = tmp_path / "mono.txt"
    path.write_text("4 1\n0 0 0\n0 0\n0\n", encoding="utf-8")
    assert main(["oracle", "robust", "--in", str(path), "--s", "2"]) == EXIT_FAILED
    assert "robust=False" in capsys.readouterr().out


def test_verify_reports_failure(tri_file, tmp_path, capsys):
    """❌ A partition that misses vertices exits 1 with its reason."""
    part = tmp_path / "bad.txt"
    part.write_text("0 0 1\n", encoding="utf-8")
    assert main(["verify", "--in", str(tri_file), "--partition", str(part)]) == EXIT_FAILED
    assert "reason=NotCovering" in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "two-local", "--in", "does/not/exist.txt"],
        ["gen", "tk", "--k", "2"],
        ["gen", "tri", "--sizes", "1,x,2"],
    ],
)
def test_input_errors_exit_two(argv):
    """❌ Missing files and bad parameters exit with code 2."""
    assert main(argv) == EXIT_INPUT


def test_parse_error_exit_two(tmp_path):
    """❌ A truncated instance file exits with code 2."""
    path = tmp_path / "short.txt"
    path.write_text("3 1\n0\n", encoding="utf-8")
    assert main(["oracle", "min", "--in", str(path)]) == EXIT_INPUT


def test_experiment_command(tmp_path, capsys):
    """✅ A small campaign from a JSON config."""
    config = tmp_path / "exp.json"
    config.write_text(json.dumps({"family": "tri-sweep", "solver": "two-local", "sweep_max": 2}), encoding="utf-8")
    argv = ["experiment", "--config", str(config), "--report-dir", str(tmp_path), "--no-progress"]
    assert main(argv) == EXIT_OK
    out = capsys.readouterr().out
    assert "instances=8 failures=0" in out
    assert (tmp_path / "tri-sweep_two-local_0.csv").exists()


def test_experiment_bad_config(tmp_path):
    """❌ An invalid config exits with code 2."""
    config = tmp_path / "exp.json"
    config.write_text(json.dumps({"count": 0}), encoding="utf-8")
    assert main(["experiment", "--config", str(config), "--report-dir", str(tmp_path)]) == EXIT_INPUT
