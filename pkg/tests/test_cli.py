import io
import json
from datetime import datetime

import pytest
import pytz

import util
from helper_objects import Record, Report
from main import main
from ultrakit.enums import OutputFormat, Status
from ultrakit.exceptions import ConfigError
from ultrakit.space import FiniteSpace, SpaceMap


def run(*argv, environment=""):
    out = io.StringIO()
    code = main([*argv, "--quiet"], environment, out)
    return code, out.getvalue()


def write_map(tmp_path, name, f):
    path = tmp_path / name
    path.write_text(json.dumps(f.to_document()))
    return str(path)


class TestExitCodes:
    def test_etale_map_passes(self, tmp_path):
        covering = SpaceMap(FiniteSpace.discrete(2), FiniteSpace.point(), (0, 0))
        code, out = run("etale", write_map(tmp_path, "covering.json", covering))
        assert code == 0
        assert out.endswith("1 passed, 0 failed\n")

    def test_collapse_is_not_etale(self, tmp_path):
        collapse = SpaceMap(FiniteSpace.sierpinski(), FiniteSpace.point(), (0, 0))
        code, out = run("etale", write_map(tmp_path, "collapse.json", collapse), "--format", "json")
        assert code == 1
        record = json.loads(out.splitlines()[0])
        assert record["suite"] == "etale"
        assert record["status"] == "fail"

    def test_missing_input(self, tmp_path):
        code, out = run("validate", str(tmp_path / "absent.json"))
        assert code == 2

    def test_validate_needs_inputs(self):
        assert run("validate")[0] == 2

    def test_bad_environment(self):
        assert run("proper", environment="max_points=x")[0] == 2
        assert run("proper", environment="colour=3")[0] == 2

    def test_out_of_range_flag(self):
        assert run("proper", "--max-points", "0")[0] == 2
        assert run("proper", "--seed", "-1")[0] == 2

    def test_flags_override_environment(self):
        code, out = run("roundtrip-space", "--max-points", "1", "--format", "json", environment="max_points=9")
        assert code == 0
        instances = [json.loads(line)["instance"] for line in out.splitlines()]
        assert "topologies:1" in instances
        assert "topologies:2" not in instances


class TestDeterminism:
    def test_same_seed_same_report(self):
        first = run("roundtrip-space", "--seed", "42", "--max-points", "1", "--format", "json")
        second = run("roundtrip-space", "--seed", "42", "--max-points", "1", "--format", "json")
        assert first == second
        assert first[0] == 0
        records = [json.loads(line) for line in first[1].splitlines()]
        assert {r["status"] for r in records} == {"pass"}
        assert records[0] == {"suite": "roundtrip-space", "instance": "topologies:1", "status": "pass",
                              "witness": {"count": 1}}

    def test_jobs_keep_order(self):
        serial = run("proper", "--max-points", "2", "--format", "json")
        pooled = run("proper", "--max-points", "2", "--format", "json", "--jobs", "2")
        assert serial == pooled


class TestUtil:
    def test_parse_bounds(self):
        assert util.parse_bounds("max_points=3, fiber_bound=2") == {"max_points": 3, "fiber_bound": 2}
        assert util.parse_bounds("") == {}

    @pytest.mark.parametrize("text", ["max_points", "depth=2", "jobs=two", "jobs=0", "seed=-1"])
    def test_bad_bounds(self, text):
        with pytest.raises(ConfigError):
            util.parse_bounds(text)

    def test_derive_seed(self):
        assert util.derive_seed(42, "etale") == util.derive_seed(42, "etale")
        assert util.derive_seed(42, "etale") != util.derive_seed(42, "proper")
        assert util.derive_seed(42, "etale") != util.derive_seed(43, "etale")
        assert util.derive_rng(7, "x").random() == util.derive_rng(7, "x").random()

    def test_format_elapsed(self):
        assert util.format_elapsed(datetime.now(pytz.UTC)) == "0 seconds"

    def test_run_jobs(self):
        assert util.run_jobs(abs, [-1, 2, -3], 1) == [1, 2, 3]


class TestReport:
    def test_text(self):
        report = Report(OutputFormat.TEXT)
        report.add(Record("etale", "a", Status.PASS, None))
        report.add(Record("etale", "b", Status.FAIL, {"point": 0}))
        assert report.render() == 'FAIL  etale b\n      {"point": 0}\n1 passed, 1 failed\n'
        assert report.exit_status == 1

    def test_json_and_errors(self):
        report = Report(OutputFormat.JSON)
        report.add(Record("validate", "input", Status.ERROR, {"error": "boom"}))
        assert json.loads(report.render()) == {
            "suite": "validate", "instance": "input", "status": "error", "witness": {"error": "boom"}
        }
        assert report.exit_status == 2
