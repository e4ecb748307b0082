import io
import json
import subprocess
import sys

import pytest

from qmix import cli
from qmix.errors import SpecError

CANON = b'{"scenario":"fig1","params":{"alpha":[0.7071067811865476,0],"beta":[0.7071067811865476,0]}}'


class TestParseSpec:
    def test_canonical(self):
        spec = cli.parse_spec(CANON)
        assert spec.scenario == "fig1"
        assert spec.tolerance == 1e-12 and spec.seed == 0 and spec.trials == 1000
        assert spec.params["alpha"] == [0.7071067811865476, 0.0]

    @pytest.mark.parametrize(
        "text",
        [
            b'{"scenario":"nope"}',
            b'{"scenario":"fig1","params":{"alpha":[1,0],"beta":[1,0]}}',
            b'{"scenario":"fig1","params":{"alpha":[1,0]}}',
            b'{"scenario":"fig1","params":{"alpha":1,"beta":0,"gamma":0}}',
            b'{"scenario":"fig3","extra":1}',
            b"{not json",
            b"[1, 2]",
            b"\xff\xfe",
            b'{"scenario":"audit","trials":0}',
            b'{"scenario":"mixed_input","params":{"ensemble":[{"weight":0.5,"state":[1,0]}]}}',
            b'{"scenario":"audit","params":{"joint_state":[1,1,0,0]}}',
        ],
    )
    def test_errors(self, text):
        with pytest.raises(SpecError):
            cli.parse_spec(text)

    def test_real_numbers_accepted(self):
        spec = cli.parse_spec('{"scenario":"wigner","params":{"alpha":1,"beta":0,"friend_outcome":"0"}}')
        assert spec.params["beta"] == [0.0, 0.0]

    @pytest.mark.parametrize("name", cli.SCENARIOS)
    def test_round_trip(self, name):
        spec = cli.canonical_spec(name, seed=5)
        assert cli.parse_spec(json.dumps(cli.spec_to_dict(spec))) == spec


class TestRun:
    def test_fig1(self):
        s = cli.run(cli.parse_spec(CANON))
        assert s.exit_status == "pass"
        rho = s.report.get_stage("reduced_S").matrix
        assert abs(rho[0, 0] - 0.5) < 1e-12 and abs(rho[0, 1]) < 1e-12

    def test_fig3(self):
        s = cli.run(cli.parse_spec(b'{"scenario":"fig3"}'))
        assert s.exit_status == "pass"

    def test_audit_seed7(self):
        spec = cli.parse_spec(b'{"scenario":"audit","trials":1000,"seed":7}')
        a, b = cli.run(spec), cli.run(spec)
        assert a.exit_status == "pass"
        assert a.report.metrics["max_abs_gap"] <= 1e-12
        assert a.report.metrics["max_abs_gap"] == b.report.metrics["max_abs_gap"]
        assert cli.emit_report(a) == cli.emit_report(b)

    def test_mixed_input_spec(self):
        text = json.dumps({
            "scenario": "mixed_input",
            "params": {"ensemble": [{"weight": 0.25, "state": [1, 0]}, {"weight": 0.75, "state": [0, [0, 1]]}]},
        })
        s = cli.run(cli.parse_spec(text))
        assert s.exit_status == "pass"
        assert abs(s.report.metrics["weight_1"] - 0.75) < 1e-12

    def test_audit_custom_joint(self):
        r = 0.5 ** 0.5
        text = json.dumps({"scenario": "audit", "trials": 50,
                           "params": {"joint_state": [0, r, r, 0],
                                      "ensemble": [{"weight": 0.5, "state": [1, 0]}, {"weight": 0.5, "state": [0, 1]}]}})
        assert cli.run(cli.parse_spec(text)).exit_status == "pass"


class TestEmit:
    def test_text(self):
        s = cli.run(cli.parse_spec(CANON))
        out = cli.emit_report(s, "text").decode()
        assert "PASS" in out and "seed: 0" in out
        for c in s.report.checks:
            assert c.description in out
        assert out.count("✓") == len(s.report.checks)

    def test_json_structure(self):
        doc = json.loads(cli.emit_report(cli.run(cli.parse_spec(CANON))))
        assert {"post_cnot", "reduced_S"} <= set(doc["report"]["stages"])
        assert doc["seed"] == 0 and doc["scenario"] == "fig1"
        m = doc["report"]["stages"]["reduced_S"]["matrix"]
        assert len(m) == 2 and len(m[0]) == 2 and len(m[0][0]) == 2
        assert doc["report"]["metrics"]["purity_S"] == pytest.approx(0.5, abs=1e-12)

    def test_byte_identical(self):
        spec = cli.parse_spec(CANON)
        assert cli.emit_report(cli.run(spec)) == cli.emit_report(cli.run(spec))


class TestMain:
    def run_main(self, argv, monkeypatch, stdin=b""):
        out = io.BytesIO()
        monkeypatch.setattr(sys, "stdout", io.TextIOWrapper(out))
        monkeypatch.setattr(sys, "stdin", io.TextIOWrapper(io.BytesIO(stdin)))
        code = cli.main(argv)
        sys.stdout.flush()
        return code, out.getvalue()

    def test_scenario_flag(self, monkeypatch):
        code, out = self.run_main(["--scenario", "fig3", "--format", "text"], monkeypatch)
        assert code == 0 and b"PASS" in out

    def test_spec_stdin(self, monkeypatch):
        code, out = self.run_main(["--spec", "-"], monkeypatch, stdin=CANON)
        assert code == 0 and json.loads(out)["exit_status"] == "pass"

    def test_spec_file(self, monkeypatch, tmp_path):
        f = tmp_path / "spec.json"
        f.write_bytes(b'{"scenario":"ambiguity","params":{"n_angles":8}}')
        code, out = self.run_main(["--spec", str(f)], monkeypatch)
        assert code == 0

    def test_parse_error_exit_2(self, monkeypatch):
        code, _ = self.run_main(["--spec", "-"], monkeypatch, stdin=b'{"scenario":"nope"}')
        assert code == 2

    def test_missing_file_exit_2(self, monkeypatch, tmp_path):
        code, _ = self.run_main(["--spec", str(tmp_path / "missing.json")], monkeypatch)
        assert code == 2

    def test_domain_error_exit_2(self, monkeypatch):
        spec = b'{"scenario":"wigner","params":{"alpha":1,"beta":0,"friend_outcome":"1"}}'
        code, _ = self.run_main(["--spec", "-"], monkeypatch, stdin=spec)
        assert code == 2

    def test_failed_check_exit_1(self, monkeypatch):
        spec = b'{"scenario":"audit","trials":5,"params":{"ensemble":[{"weight":1,"state":[1,0]}]}}'
        code, out = self.run_main(["--spec", "-"], monkeypatch, stdin=spec)
        assert code == 1 and json.loads(out)["exit_status"] == "fail"

    @pytest.mark.parametrize("argv", [["--bogus"], [], ["--scenario", "fig1", "--spec", "x"], ["--run-all", "--scenario", "fig1"]])
    def test_usage_errors(self, monkeypatch, argv):
        with pytest.raises(SystemExit) as exc:
            self.run_main(argv, monkeypatch)
        assert exc.value.code == 2

    def test_overrides(self, monkeypatch):
        code, out = self.run_main(["--scenario", "audit", "--seed", "3", "--trials", "10"], monkeypatch)
        doc = json.loads(out)
        assert code == 0 and doc["seed"] == 3 and doc["spec"]["trials"] == 10

    def test_run_all_text(self, monkeypatch):
        code, out = self.run_main(["run-all"], monkeypatch)
        lines = out.decode().splitlines()
        assert code == 0
        assert [ln.split()[0] for ln in lines[:-1]] == sorted(cli.SCENARIOS)
        assert lines[-1] == "PASS"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qmix", "--scenario", "fig1", "--format", "text"],
                          capture_output=True, check=False)
    assert proc.returncode == 0 and b"PASS" in proc.stdout
