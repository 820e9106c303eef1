import csv
import json
from pathlib import Path

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from amsducalc import __version__
from amsducalc.cli import main
from amsducalc.profile import default_profile, load_profile
from amsducalc.service import app


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, args, **kwargs):
    return runner.invoke(main, args, catch_exceptions=False, **kwargs)


def read_csv(path: Path):
    with path.open(newline="") as handle:
        return list(csv.DictReader(handle))


def data_files(out_dir: Path):
    return sorted(p for p in out_dir.iterdir() if p.name != "manifest.json")


class TestPerSweep:
    def test_default_run_writes_one_csv_per_rate(self, runner, tmp_path):
        out = tmp_path / "out"
        result = invoke(runner, ["per-sweep", "--out-dir", str(out)])
        assert result.exit_code == 0
        names = {p.name for p in out.iterdir()}
        assert names == {
            "per_r0.001_msdu100.csv", "per_r0.0001_msdu100.csv",
            "per_r1e-05_msdu100.csv", "per_sweep.json", "manifest.json",
        }
        assert "monotonicity: 0 violations" in result.output

    def test_csv_schema_and_row_count(self, runner, tmp_path):
        out = tmp_path / "out"
        invoke(runner, ["per-sweep", "--out-dir", str(out)])
        rows = read_csv(out / "per_r0.001_msdu100.csv")
        assert len(rows) == 9 * 32
        assert list(rows[0].keys()) == ["mcs_index", "depth", "per", "status"]
        assert rows[0]["status"] == "ok"

    def test_zero_rate_grid(self, runner, tmp_path):
        out = tmp_path / "out"
        result = invoke(runner, ["per-sweep", "--rates", "0", "--out-dir", str(out)])
        assert result.exit_code == 0
        rows = read_csv(out / "per_r0_msdu100.csv")
        assert {r["per"] for r in rows} == {"0.0"}

    def test_reruns_are_byte_identical(self, runner, tmp_path):
        args = ["per-sweep", "--mcs", "0,4,8", "--depths", "1-8",
                "--mc-frames", "5000", "--seed", "9"]
        a, b = tmp_path / "a", tmp_path / "b"
        invoke(runner, args + ["--out-dir", str(a)])
        invoke(runner, args + ["--out-dir", str(b)])
        files_a, files_b = data_files(a), data_files(b)
        assert [p.name for p in files_a] == [p.name for p in files_b]
        for fa, fb in zip(files_a, files_b):
            assert fa.read_bytes() == fb.read_bytes()

    def test_monte_carlo_columns_present_when_requested(self, runner, tmp_path):
        out = tmp_path / "out"
        invoke(runner, ["per-sweep", "--mcs", "8", "--depths", "1",
                        "--mc-frames", "2000", "--out-dir", str(out)])
        rows = read_csv(out / "per_r0.001_msdu100.csv")
        assert "mc_per" in rows[0] and "mc_z" in rows[0]

    def test_bad_depths_flag_exits_2(self, runner, tmp_path):
        result = runner.invoke(main, ["per-sweep", "--depths", "bogus"])
        assert result.exit_code == 2

    def test_out_of_range_rate_exits_2(self, runner):
        result = runner.invoke(main, ["per-sweep", "--rates", "2.0"])
        assert result.exit_code == 2


class TestAirtimeSweep:
    def test_default_run(self, runner, tmp_path):
        out = tmp_path / "out"
        result = invoke(runner, ["airtime-sweep", "--out-dir", str(out)])
        assert result.exit_code == 0
        names = {p.name for p in out.iterdir()}
        assert names == {"airtime_msdu100.csv", "airtime_msdu1000.csv",
                         "airtime_msdu10000.csv", "airtime_sweep.json", "manifest.json"}
        big = read_csv(out / "airtime_msdu10000.csv")
        assert any(r["capped"] == "true" for r in big)
        assert any(r["status"] == "infeasible" for r in big)

    def test_single_msdu_grid(self, runner, tmp_path):
        out = tmp_path / "out"
        invoke(runner, ["airtime-sweep", "--msdu", "200", "--out-dir", str(out)])
        assert (out / "airtime_msdu200.csv").exists()
        assert len(list(out.glob("airtime_msdu*.csv"))) == 1

    def test_basic_rate_flag_adds_strictly_decreasing_csv(self, runner, tmp_path):
        out = tmp_path / "out"
        invoke(runner, ["airtime-sweep", "--msdu", "100", "--depths", "1",
                        "--basic-rate", "6,12,24,54", "--out-dir", str(out)])
        rows = read_csv(out / "ovh2_basic_rate.csv")
        per_mcs = {}
        for row in rows:
            per_mcs.setdefault(row["mcs_index"], []).append(float(row["ovh2_us"]))
        for costs in per_mcs.values():
            assert all(b < a for a, b in zip(costs, costs[1:]))


class TestPolicyCompare:
    def test_default_run_prints_verdict_summary(self, runner, tmp_path):
        out = tmp_path / "out"
        result = invoke(runner, ["policy-compare", "--out-dir", str(out)])
        assert result.exit_code == 0
        assert "equivalent 15/27" in result.output
        assert "worse 0/27" in result.output
        assert "rate-control infeasible where adaptive feasible: 3" in result.output
        rows = read_csv(out / "policy_compare.csv")
        assert len(rows) == 27

    def test_vacuous_target_all_equivalent(self, runner, tmp_path):
        out = tmp_path / "out"
        invoke(runner, ["policy-compare", "--target", "0.99", "--out-dir", str(out)])
        rows = read_csv(out / "policy_compare.csv")
        assert {r["verdict"] for r in rows} == {"equivalent"}

    def test_mg1_flag_appends_penalty(self, runner, tmp_path):
        out = tmp_path / "out"
        result = invoke(runner, ["policy-compare", "--out-dir", str(out),
                                 "--mg1", "50,60,100,1e-4"])
        assert "penalty=0.44999999999999996" in result.output

    def test_malformed_mg1_flag_exits_2(self, runner, tmp_path):
        result = runner.invoke(main, ["policy-compare", "--out-dir", str(tmp_path),
                                      "--mg1", "50,60"])
        assert result.exit_code == 2

    def test_expected_retry_columns(self, runner, tmp_path):
        out = tmp_path / "out"
        invoke(runner, ["policy-compare", "--expected-retry", "--out-dir", str(out)])
        rows = read_csv(out / "policy_compare.csv")
        assert "rc_expected_airtime_per_msdu_us" in rows[0]


class TestProfileDump:
    def test_stdout_round_trips(self, runner):
        result = invoke(runner, ["profile-dump"])
        assert result.exit_code == 0
        assert load_profile(result.stdout) == default_profile()
        assert "fingerprint: " in result.stderr

    def test_respects_profile_file(self, runner, tmp_path):
        source = tmp_path / "p.conf"
        source.write_text("basic_rate = 24\n")
        result = invoke(runner, ["profile-dump", "--profile", str(source)])
        assert load_profile(result.stdout).basic_rate == 24.0

    def test_out_file(self, runner, tmp_path):
        target = tmp_path / "dumped.conf"
        result = invoke(runner, ["profile-dump", "--out", str(target)])
        assert result.exit_code == 0
        assert load_profile(target.read_text()) == default_profile()
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert manifest["output_files"] == ["dumped.conf"]

    def test_missing_profile_file_exits_1(self, runner, tmp_path):
        result = runner.invoke(main, ["profile-dump", "--profile",
                                      str(tmp_path / "nope.conf")])
        assert result.exit_code == 1

    def test_invalid_profile_content_exits_2(self, runner, tmp_path):
        bad = tmp_path / "bad.conf"
        bad.write_text("t_sifs = 0\n")
        result = runner.invoke(main, ["profile-dump", "--profile", str(bad)])
        assert result.exit_code == 2
        assert "t_sifs" in result.output + result.stderr


class TestMg1Command:
    def test_prints_both_variants(self, runner):
        result = invoke(runner, ["mg1", "--lam", "50", "--lam2", "60",
                                 "--mu", "100", "--sigma", "1e-4"])
        assert result.exit_code == 0
        assert "penalty=0.44999999999999996" in result.output
        assert "textbook" in result.output
        assert "sigma" in result.output

    def test_unstable_exits_2(self, runner):
        result = runner.invoke(main, ["mg1", "--lam", "50", "--lam2", "100",
                                      "--mu", "100", "--sigma", "1e-4"])
        assert result.exit_code == 2

    def test_missing_flag_exits_2(self, runner):
        result = runner.invoke(main, ["mg1", "--lam", "50"])
        assert result.exit_code == 2


class TestManifest:
    def test_manifest_lists_existing_outputs(self, runner, tmp_path):
        out = tmp_path / "out"
        invoke(runner, ["per-sweep", "--out-dir", str(out)])
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["command"] == "per-sweep"
        assert manifest["tool_version"] == __version__
        assert len(manifest["profile_fingerprint"]) == 64
        assert "timestamp_utc" in manifest
        for name in manifest["output_files"]:
            assert (out / name).exists()


class TestRemoteMode:
    def test_server_flag_routes_over_http(self, runner, tmp_path, monkeypatch):
        client = TestClient(app)
        calls = []

        def fake_post(url, json=None, timeout=None):
            calls.append(url)
            return client.post(url.replace("http://svc", ""), json=json)

        monkeypatch.setattr("amsducalc.cli.httpx.post", fake_post)
        out = tmp_path / "remote"
        result = invoke(runner, ["--server", "http://svc", "per-sweep",
                                 "--out-dir", str(out)])
        assert result.exit_code == 0
        assert calls == ["http://svc/sweep/per"]
        local = tmp_path / "local"
        invoke(runner, ["per-sweep", "--out-dir", str(local)])
        for remote_file, local_file in zip(data_files(out), data_files(local)):
            assert remote_file.read_bytes() == local_file.read_bytes()

    def test_remote_400_maps_to_exit_2(self, runner, monkeypatch):
        client = TestClient(app)
        monkeypatch.setattr(
            "amsducalc.cli.httpx.post",
            lambda url, json=None, timeout=None: client.post(
                url.replace("http://svc", ""), json=json),
        )
        result = runner.invoke(main, ["--server", "http://svc", "per-sweep",
                                      "--rates", "2.0"])
        assert result.exit_code == 2

    def test_unreachable_server_exits_1(self, runner):
        result = runner.invoke(main, ["--server", "http://127.0.0.1:1",
                                      "mg1", "--lam", "1", "--lam2", "2",
                                      "--mu", "10", "--sigma", "0"])
        assert result.exit_code == 1
