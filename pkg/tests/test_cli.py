import csv
import io
import json
import math

import click
import pytest
from click.testing import CliRunner
from hypothesis import given
from hypothesis import strategies as st

from besselindex import transforms, verify
from besselindex.cli import Row, cli, parse_grid, parse_index_range, render_rows
from besselindex.transforms import PeriodicProfile, TransformKind


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(cli, [str(a) for a in args], catch_exceptions=False)
    return invoke


def rows_of(output):
    return list(csv.DictReader(io.StringIO(output)))


def write_json(path, data):
    path.write_text(json.dumps(data))
    return str(path)


class TestParsing:
    @pytest.mark.parametrize("spec, want", [
        ("0:1:0.5", [0.0, 0.5, 1.0]), ("0:1.2:0.5", [0.0, 0.5, 1.0]), ("0:1.3:0.5", [0.0, 0.5, 1.0, 1.5]),
        ("2", [2.0]), ("1:1:0.1", [1.0])])
    def test_grid(self, spec, want):
        assert parse_grid(spec) == pytest.approx(want)

    @pytest.mark.parametrize("spec", ["", "a:b:c", "0:1", "0:1:0", "1:0:0.1", "0:1:-1", "0:inf:1"])
    def test_bad_grid(self, spec):
        with pytest.raises(click.BadParameter):
            parse_grid(spec)

    @given(st.floats(0.01, 10), st.integers(0, 200), st.floats(0.01, 1))
    def test_grid_properties(self, start, count, step):
        pts = parse_grid(f"{start!r}:{start + count * step!r}:{step!r}")
        assert len(pts) == count + 1
        assert pts[0] == start and pts[-1] == pytest.approx(start + count * step)

    @pytest.mark.parametrize("spec, want", [("3", [3]), ("0..3", [0, 1, 2, 3]), ("1,4,2", [1, 4, 2])])
    def test_index_range(self, spec, want):
        assert parse_index_range(spec) == want

    @pytest.mark.parametrize("spec", ["x", "3..1", "-1", "1..b"])
    def test_bad_index_range(self, spec):
        with pytest.raises(click.BadParameter):
            parse_index_range(spec)


class TestRendering:
    def test_csv(self):
        text = render_rows([Row(1, 0.1, 1 / 3, 1e-17), Row(2, None, math.nan, math.nan, "error: x")], "csv")
        lines = text.splitlines()
        assert lines[0] == "index,x,value,err_est,status"
        assert lines[1] == "1,0.10000000000000001,0.33333333333333331,1.0000000000000001e-17,ok"
        assert lines[2] == "2,,nan,nan,error: x"

    def test_json(self):
        data = json.loads(render_rows([Row(0, 1.0, math.nan, math.inf, "error")], "json"))
        assert data == [{"index": 0, "x": 1.0, "value": None, "err_est": None, "status": "error"}]

    @given(st.floats(allow_nan=False, allow_infinity=False))
    def test_csv_round_trips_floats(self, v):
        row = rows_of(render_rows([Row(0, v, v, 0.0)], "csv"))[0]
        assert float(row["value"]) == v


class TestEval:
    def test_bessel_j0(self, run):
        res = run("eval", "besselj-norm", "--n", 0, "--x", 1)
        assert res.exit_code == 0
        row = rows_of(res.output)[0]
        assert float(row["value"]) == pytest.approx(0.7651976866, abs=1e-10)
        assert float(row["err_est"]) < 1e-10 and row["status"] == "ok"

    def test_kernel_phi_near_zero(self, run):
        res = run("eval", "kernel-phi", "--n", 2, "--x", 1e-4)
        assert res.exit_code == 0
        assert abs(float(rows_of(res.output)[0]["value"])) < 1e-2

    @pytest.mark.parametrize("mu", [0.9, -1.5])
    def test_lommel_mu_range(self, run, mu):
        res = CliRunner().invoke(cli, ["eval", "lommel-s", "--mu", str(mu), "--n", "1", "--x", "1"])
        assert res.exit_code == 2

    def test_grid_and_orders(self, run):
        res = run("eval", "besselk", "--n", "1..2", "--x-grid", "1:2:0.5")
        rows = rows_of(res.output)
        assert res.exit_code == 0 and len(rows) == 6
        assert [int(r["index"]) for r in rows] == [1, 1, 1, 2, 2, 2]

    def test_lommel_matches_library(self, run):
        from besselindex import specfun
        res = run("eval", "lommel-s", "--mu", -0.5, "--n", 1, "--x", 2, "--format", "json")
        val = json.loads(res.output)[0]["value"]
        assert val == pytest.approx(specfun.lommel_s(-0.5, 1, 2.0).value, rel=1e-12)

    def test_row_failure_sets_exit_code(self, run):
        res = run("eval", "besselj-norm", "--n", 0, "--x", 1, "--part", "im")
        assert res.exit_code == 1
        assert rows_of(res.output)[0]["status"].startswith("error")

    def test_domain_failure_row(self, run):
        res = run("eval", "kernel-psi", "--n", 1, "--x-grid", "0:1:0.5")
        rows = rows_of(res.output)
        assert res.exit_code == 1
        assert rows[0]["status"].startswith("error") and rows[1]["status"] == "ok"

    @pytest.mark.parametrize("args", [
        ["eval", "besselk", "--n", "1"], ["eval", "besselk", "--n", "1", "--x", "1", "--x-grid", "1:2:1"],
        ["eval", "besselk", "--n", "1", "--x-grid", "1:2"], ["eval", "lommel-s", "--n", "1", "--x", "1"],
        ["eval", "besselk", "--n", "1", "--x", "1", "--mu", "-0.5"], ["eval", "airy", "--x", "1"]])
    def test_usage_errors(self, args):
        assert CliRunner().invoke(cli, args).exit_code == 2

    def test_deterministic_and_out_file(self, run, tmp_path):
        args = ("eval", "kernel-omega", "--mu", -0.5, "--n", "1..3", "--x-grid", "0.5:20:0.5")
        first, second = run(*args).output, run(*args).output
        assert first == second
        out = tmp_path / "k.csv"
        assert run(*args, "--out", out).output == ""
        assert out.read_text() == first


class TestTransform:
    def test_synth_delta(self, run, tmp_path):
        path = write_json(tmp_path / "a.json", {"start_index": 0, "coeffs": [1]})
        res = run("transform", "synth", "--kind", "re", "--coeffs", path, "--x-grid", "0.5:2:0.5")
        from besselindex import specfun
        vals = [float(r["value"]) for r in rows_of(res.output)]
        assert vals == pytest.approx([float(specfun.jin_normalized(0, x)[0]) for x in (0.5, 1, 1.5, 2)], abs=1e-12)

    def test_analyze_profile(self, run):
        res = run("transform", "analyze", "--kind", "re", "--profile", "1-cos", "--n-max", 4)
        assert res.exit_code == 0
        vals = [float(r["value"]) for r in rows_of(res.output)]
        assert vals == pytest.approx([math.pi, -math.pi / 2, 0, 0, 0], abs=1e-6)

    def test_invert_fn_lommel(self, run, tmp_path):
        kind = TransformKind.lommel(-0.5)
        psi = PeriodicProfile.preset("sin")
        coeffs = [transforms.profile_coefficients(kind, psi, n) for n in (1, 2, 3)]
        path = write_json(tmp_path / "c.json", {"kind": "lommel", "mu": -0.5, "start_index": 1, "coeffs": coeffs})
        res = run("transform", "invert-fn", "--kind", "lommel", "--mu", -0.5, "--coeffs", path,
                  "--x-grid", "0.5:2:0.5")
        assert res.exit_code == 0
        for r in rows_of(res.output):
            want = transforms.build_profile_function(kind, psi, float(r["x"]))
            assert float(r["value"]) == pytest.approx(want, abs=1e-9)

    def test_invert_seq_lommel(self, run, tmp_path):
        path = write_json(tmp_path / "c.json", {"start_index": 1, "coeffs": [1.0, 0.5]})
        res = run("transform", "invert-seq", "--kind", "lommel", "--mu", -0.5, "--coeffs", path, "--n", "1,2")
        assert res.exit_code == 0
        assert [float(r["value"]) for r in rows_of(res.output)] == pytest.approx([1.0, 0.5], abs=1e-6)

    def test_profile_file(self, run, tmp_path):
        path = write_json(tmp_path / "p.json", {"cos_coeffs": [0.5, 0, -0.5], "sin_coeffs": []})
        res = run("transform", "analyze", "--kind", "im", "--profile", path, "--n", 2, "--format", "json")
        assert json.loads(res.output)[0]["value"] == pytest.approx(math.pi / 4, abs=1e-6)

    @pytest.mark.parametrize("args", [
        ["transform", "analyze", "--kind", "re", "--n", "1"],
        ["transform", "analyze", "--kind", "re", "--profile", "sin", "--n", "1"],
        ["transform", "analyze", "--kind", "im", "--profile", "1-cos", "--n", "0"],
        ["transform", "analyze", "--kind", "lommel", "--profile", "sin", "--n", "1"],
        ["transform", "analyze", "--kind", "re", "--mu", "-0.5", "--profile", "1-cos", "--n", "1"],
        ["transform", "analyze", "--kind", "lommel", "--mu", "0.5", "--profile", "sin", "--n", "1"],
        ["transform", "analyze", "--kind", "re", "--profile", "1-cos"]])
    def test_usage_errors(self, args):
        assert CliRunner().invoke(cli, args).exit_code == 2

    @pytest.mark.parametrize("content", ["{not json", json.dumps({"start_index": 0}),
                                         json.dumps({"start_index": 0, "coeffs": [1.0]})])
    def test_bad_coefficient_files(self, tmp_path, content):
        path = tmp_path / "bad.json"
        path.write_text(content)
        res = CliRunner().invoke(cli, ["transform", "synth", "--kind", "im", "--coeffs", str(path),
                                       "--x-grid", "1"])
        assert res.exit_code == 2


class TestVerify:
    def test_identities_example(self, run, tmp_path):
        out = tmp_path / "r.json"
        res = run("verify", "identities", "--eq", "2.4", "--n", "0..3", "--u", "0.5,1,2", "--out", out)
        assert res.exit_code == 0
        report = json.loads(out.read_text())
        assert report["header"]["counts"] == {"pass": 12, "fail": 0, "inconclusive": 0}
        recs = report["records"]
        assert all(r["status"] == "pass" and r["check_id"] == "Eq2_4" for r in recs)
        assert all(r["abs_err"] <= 1e-6 * (1 + abs(r["rhs"])) for r in recs)
        assert set(recs[0]) == {"check_id", "params", "lhs", "rhs", "abs_err", "status"}

    def test_inconclusive_keeps_exit_zero(self, run):
        res = run("verify", "identities", "--eq", "Eq2_8", "--n", 1, "--x", 1, "--tol", 1e-20)
        assert res.exit_code == 0
        assert json.loads(res.output)["header"]["counts"]["inconclusive"] == 1

    def test_failing_check_sets_exit_code(self, run, monkeypatch):
        original = verify.check_bounds
        monkeypatch.setattr(verify, "check_bounds", lambda t: original(t, limit=1e-3))
        res = run("verify", "bounds", "--target", "Lebedev_2_34")
        assert res.exit_code == 1
        assert json.loads(res.output)["header"]["counts"]["fail"] == 1

    def test_unknown_identity(self):
        assert CliRunner().invoke(cli, ["verify", "identities", "--eq", "9.9"]).exit_code == 2

    def test_ode_lommel(self, run):
        res = run("verify", "ode", "--target", "lommel", "--mu", -0.5)
        assert res.exit_code == 0
        recs = json.loads(res.output)["records"]
        assert len(recs) == 3 and all(r["status"] == "pass" for r in recs)

    def test_bounds(self, run):
        res = run("verify", "bounds")
        assert res.exit_code == 0
        assert [r["check_id"] for r in json.loads(res.output)["records"]] == sorted(
            ["Lebedev_2_34", "Lommel_2_33", "TheoremProof_JBound"])

    def test_roundtrip_seq_file(self, run, tmp_path):
        path = write_json(tmp_path / "cubic-decay.json",
                          {"kind": "re", "start_index": 0, "coeffs": [1 / (n + 1) ** 3 for n in range(3)]})
        res = run("verify", "roundtrip", "--kind", "re", "--seq-file", path)
        assert res.exit_code == 0
        rec = json.loads(res.output)["records"][0]
        assert rec["status"] == "pass" and rec["abs_err"] <= 1e-4

    def test_roundtrip_profile(self, run):
        res = run("verify", "roundtrip", "--kind", "lommel", "--mu", -0.5, "--profile", "sin",
                  "--x-grid", "1:3:1")
        assert res.exit_code == 0
        rec = json.loads(res.output)["records"][0]
        assert rec["params"]["items"] == [1.0, 2.0, 3.0] and rec["status"] == "pass"

    def test_deterministic_report(self, run):
        args = ("verify", "ode", "--target", "besselj", "--n", "1")
        assert run(*args).output == run(*args).output


def test_version(run):
    res = run("--version")
    assert res.exit_code == 0 and "besselindex" in res.output
