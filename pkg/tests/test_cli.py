import json
import shutil
import subprocess
import sys

import pytest

from setpairs import canonical_form, five_cycle
from setpairs.cli import EXIT_CONTRADICTION, EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from setpairs.jsonio import load_system


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestVerify:
    def test_five_cycle_all_checks(self, capsys, fixtures_dir):
        code, out, _ = run(capsys, "--json", "verify", str(fixtures_dir / "five_cycle.json"))
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["results"]["system"]["sigma"]["exact"] == "5/6"
        assert {c["check"] for c in report["results"]["checks"]} >= {"one-cross", "main-theorem", "diamond"}
        assert len(report["input_digest"]) == 64

    def test_text_output(self, capsys, fixtures_dir):
        code, out, _ = run(capsys, "verify", str(fixtures_dir / "triangle.json"), "--checks", "exceptions,bollobas")
        assert code == EXIT_OK
        assert "sigma = 1" in out and "status: ok" in out

    def test_failed_check(self, capsys, tmp_path):
        code, _, _ = run(capsys, "construct", "bollobas", "--a", "2", "--b", "2", "-o", str(tmp_path / "b.json"))
        assert code == EXIT_OK
        code, out, _ = run(capsys, "verify", str(tmp_path / "b.json"), "--checks", "one-cross,main-theorem")
        assert code == EXIT_FAIL and "FAIL" in out

    def test_malformed(self, capsys, fixtures_dir):
        code, _, err = run(capsys, "verify", str(fixtures_dir / "malformed.json"))
        assert code == EXIT_USAGE and "line" in err

    def test_missing_file_and_bad_check(self, capsys, tmp_path, fixtures_dir):
        assert run(capsys, "verify", str(tmp_path / "nope.json"))[0] == EXIT_USAGE
        assert run(capsys, "verify", str(fixtures_dir / "five_cycle.json"), "--checks", "bogus")[0] == EXIT_USAGE


class TestConstruct:
    @pytest.mark.parametrize("argv", [["five-cycle"], ["singleton-swap"], ["triangle"], ["figure1"],
                                      ["power", "--n", "3"], ["bollobas", "--a", "1", "--b", "2"]])
    def test_round_trip(self, capsys, tmp_path, argv):
        path = tmp_path / "s.json"
        assert run(capsys, "construct", *argv, "-o", str(path))[0] == EXIT_OK
        S = load_system(path)
        code, out, _ = run(capsys, "--json", "verify", str(path))
        assert json.loads(out)["results"]["system"]["canonical_form"] == canonical_form(S).hex()
        assert code in (EXIT_OK, EXIT_FAIL)

    def test_stdout_is_json(self, capsys):
        code, out, err = run(capsys, "construct", "five-cycle")
        assert code == EXIT_OK
        assert "pairs" in json.loads(out) and "five-cycle" in err

    def test_usage_errors(self, capsys):
        assert run(capsys, "construct", "power")[0] == EXIT_USAGE
        assert run(capsys, "construct", "power", "--n", "1")[0] == EXIT_USAGE
        assert run(capsys, "construct", "bollobas", "--a", "2")[0] == EXIT_USAGE
        with pytest.raises(SystemExit) as exc:
            main(["construct", "hexagon"])
        assert exc.value.code == EXIT_USAGE

    def test_power_matches_library(self, capsys, tmp_path):
        path = tmp_path / "p.json"
        run(capsys, "construct", "five-cycle", "-o", str(path))
        assert canonical_form(load_system(path)) == canonical_form(five_cycle())


class TestSearch:
    def test_22(self, capsys, tmp_path):
        code, out, _ = run(capsys, "--json", "search", "--a", "2", "--b", "2", "--emit-extremal", str(tmp_path))
        assert code == EXIT_OK
        res = json.loads(out)["results"]
        assert res["max_m"] == 5 and res["classes"] == 1 and res["proof_of_maximality"]
        assert canonical_form(load_system(res["emitted"][0])) == canonical_form(five_cycle())

    def test_indeterminate(self, capsys):
        code, out, _ = run(capsys, "search", "--a", "3", "--b", "3", "--time-budget", "1")
        assert code == EXIT_OK and "INDETERMINATE" in out

    def test_bad_config(self, capsys):
        assert run(capsys, "search", "--a", "0", "--b", "2")[0] == EXIT_USAGE


class TestLemmas:
    def test_default(self, capsys):
        code, out, _ = run(capsys, "--json", "lemmas")
        assert code == EXIT_OK
        res = json.loads(out)["results"]
        assert res["one-third"]["pairs_scanned"] == 99 * 99
        assert res["one-fifth"]["equality_points"] == [[3, 2], [4, 2]]
        assert not res["one-third"]["violations"] and not res["one-fifth"]["violations"]

    def test_bad_range(self, capsys):
        assert run(capsys, "lemmas", "--max", "1")[0] == EXIT_USAGE

    def test_unexpected_equality_is_a_contradiction(self, capsys, monkeypatch):
        monkeypatch.setitem(__import__("setpairs.cli").cli.EXPECTED_EQUALITY, "one-fifth", [(3, 2)])
        assert run(capsys, "lemmas", "--max", "10")[0] == EXIT_CONTRADICTION


def test_reports_byte_identical(capsys, tmp_path, fixtures_dir):
    report = tmp_path / "r.json"
    argv = ["--no-timing", "--report", str(report), "verify", str(fixtures_dir / "power4.json")]
    run(capsys, *argv)
    first = report.read_bytes()
    run(capsys, *argv)
    assert report.read_bytes() == first
    assert b"duration_s" not in first


def test_timing_present_by_default(capsys, fixtures_dir):
    _, out, _ = run(capsys, "--json", "verify", str(fixtures_dir / "five_cycle.json"))
    assert "duration_s" in json.loads(out)


def test_console_script(fixtures_dir):
    exe = shutil.which("setpairs")
    cmd = [exe] if exe else [sys.executable, "-m", "setpairs.cli"]
    proc = subprocess.run(cmd + ["verify", str(fixtures_dir / "malformed.json")], capture_output=True, text=True)
    assert proc.returncode == EXIT_USAGE
