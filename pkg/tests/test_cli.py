import json
import subprocess
import sys

import pytest

from darbouxkit.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


class TestCheck:
    def test_invertible_operator_passes(self, capsys, fixtures_dir):
        code, report = run_json(capsys, "check", fixtures_dir / "invertible_dx.op")
        assert code == 0
        assert report["results"][0]["operator"] == "Dx*Dy^2 + Dx^2 + x*Dx + 1"

    def test_failing_condition_exits_one(self, capsys, tmp_path):
        f = tmp_path / "l.op"
        f.write_text("Dx*Dy + y*Dx + x\n")
        code, _ = run_json(capsys, "check", f, "--direction", "dy")
        assert code == 1

    def test_empty_file(self, capsys, tmp_path):
        f = tmp_path / "empty.op"
        f.write_text("# nothing here\n")
        code, report = run_json(capsys, "check", f)
        assert code == 0
        assert report["results"] == []

    def test_both_directions(self, capsys, fixtures_dir):
        _, report = run_json(capsys, "check", fixtures_dir / "invertible_dx.op", "--direction", "both")
        assert len(report["results"]) == 2


class TestErrors:
    def test_parse_error_exits_two(self, capsys, tmp_path):
        f = tmp_path / "bad.op"
        f.write_text("Dx + $\n")
        code, _, err = run(capsys, "check", f)
        assert code == 2
        assert "parse error" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = run(capsys, "check", tmp_path / "absent.op")
        assert code == 2

    def test_usage_error(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["transform"])
        assert info.value.code == 2


class TestTransform:
    def test_invertible_example(self, capsys, fixtures_dir):
        code, report = run_json(capsys, "transform", fixtures_dir / "invertible_dx.op")
        entry = report["results"][0]
        assert code == 0
        assert entry["L1"] == "Dx*Dy^2 + Dx^2 + x*Dx + 2"
        assert entry["N"] == "Dx"

    def test_with_psi(self, capsys, fixtures_dir):
        code, report = run_json(capsys, "transform", fixtures_dir / "finite_kernel.op", "--psi", "x")
        entry = report["results"][0]
        assert code == 0
        assert entry["M"] == "Dx - 1/x"

    def test_zero_psi(self, capsys, fixtures_dir):
        code, report = run_json(capsys, "transform", fixtures_dir / "finite_kernel.op", "--psi", "0")
        assert code == 1
        assert "error" in report["results"][0]

    def test_json_is_deterministic(self, capsys, fixtures_dir):
        args = ("transform", fixtures_dir / "finite_kernel.op", "--psi", "x", "--seed", 7)
        _, first, _ = run(capsys, *args, "--json")
        _, second, _ = run(capsys, *args, "--json")
        assert first == second
        assert json.loads(first)["seed"] == 7

    def test_timing_is_opt_in(self, capsys, fixtures_dir):
        _, report = run_json(capsys, "check", fixtures_dir / "invertible_dx.op")
        assert "seconds" not in report
        _, report = run_json(capsys, "check", fixtures_dir / "invertible_dx.op", "--timing")
        assert report["seconds"] >= 0


class TestOtherCommands:
    def test_invertible(self, capsys, fixtures_dir):
        code, report = run_json(capsys, "invertible", fixtures_dir / "invertible_dx.op")
        assert code == 0
        assert report["results"][0]["invertibility"]["class"] == "invertible"

    def test_invertible_not_applicable(self, capsys, fixtures_dir):
        code, report = run_json(capsys, "invertible", fixtures_dir / "finite_kernel.op")
        assert code == 1
        assert report["results"][0]["error"] == "NotApplicable"

    def test_laplace(self, capsys, fixtures_dir):
        code, report = run_json(capsys, "laplace", fixtures_dir / "laplace.op")
        # the last operator has a zero invariant
        assert code == 1
        assert report["results"][0]["M"] == "Dx + x"
        assert report["results"][-1]["error"] == "ZeroInvariant"

    def test_wronskian_dependent(self, capsys):
        code, report = run_json(capsys, "wronskian", "--t", 1, "--s", 0, "x", "x*y")
        assert code == 0
        assert report["results"][0]["determinant"] == "0"

    def test_wop(self, capsys):
        code, report = run_json(capsys, "wop", "--m", 1, "--n", 0, "x")
        assert code == 0
        assert report["results"][0]["M"] == "Dx - 1/x"

    def test_wop_against_operator(self, capsys, fixtures_dir):
        code, report = run_json(capsys, "wop", "--m", 1, "--n", 0, "x",
                                "--operator", fixtures_dir / "finite_kernel.op")
        assert code == 0
        assert report["results"][1]["psis_in_kernel"] is True

    def test_verify(self, capsys):
        base = ["verify", "--N", "Dx", "--L", "Dx*Dy^2 + Dx^2 + x*Dx + 1", "--M", "Dx"]
        code, _ = run_json(capsys, *base, "--L1", "Dx*Dy^2 + Dx^2 + x*Dx + 2")
        assert code == 0
        code, report = run_json(capsys, *base, "--L1", "Dx*Dy^2 + Dx^2 + x*Dx + 3")
        assert code == 1
        assert report["results"][0]["verification"]["status"] == "fails"


def test_module_entry_point(fixtures_dir):
    proc = subprocess.run([sys.executable, "-m", "darbouxkit", "check", str(fixtures_dir / "invertible_dx.op")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "Dx*Dy^2" in proc.stdout
