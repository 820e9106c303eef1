import pytest
from fastapi.testclient import TestClient

from amsducalc import __version__
from amsducalc.airtime import BackoffModel, FrameSpec, total_airtime
from amsducalc.error_model import ChannelModel, per_for_transmission
from amsducalc.profile import default_profile, dump_profile, profile_fingerprint
from amsducalc.service import app
from amsducalc.sweeps import SweepSpec, run_per_sweep


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


class TestHealthAndProfile:
    def test_health(self, client):
        body = client.get("/health").json()
        assert body == {"status": "ok", "version": __version__}

    def test_render_default_profile(self, client):
        body = client.post("/profile/render", json={}).json()
        profile = default_profile()
        assert body["canonical_text"] == dump_profile(profile)
        assert body["fingerprint"] == profile_fingerprint(profile)
        assert body["profile"]["t_sifs"] == 10.0
        assert len(body["profile"]["mcs_table"]) == 9

    def test_render_with_override(self, client):
        body = client.post("/profile/render",
                           json={"profile_text": "basic_rate = 24"}).json()
        assert body["profile"]["basic_rate"] == 24.0

    def test_bad_profile_is_a_400_with_line_context(self, client):
        response = client.post("/profile/render",
                               json={"profile_text": "t_sifs = 10\nbogus = 1"})
        assert response.status_code == 400
        assert "line 2" in response.json()["detail"]

    def test_invariant_violation_names_the_field(self, client):
        response = client.post("/profile/render", json={"profile_text": "t_difs = -1"})
        assert response.status_code == 400
        assert "t_difs" in response.json()["detail"]


class TestPointEndpoints:
    def test_airtime_total_matches_core(self, client):
        body = client.post("/airtime/total", json={
            "msdu_size": 640, "agg_depth": 3, "mcs_index": 5,
        }).json()
        profile = default_profile()
        bd = total_airtime(profile, FrameSpec(640, 3), profile.mcs(5), BackoffModel())
        assert body["total_us"] == bd.total
        assert body["airtime_per_msdu_us"] == bd.total / 3
        assert body["effective_depth"] == 3

    def test_airtime_infeasible_is_400(self, client):
        response = client.post("/airtime/total", json={
            "msdu_size": 10000, "agg_depth": 1, "mcs_index": 0,
        })
        assert response.status_code == 400
        assert "PPDU cap" in response.json()["detail"]

    def test_airtime_bad_mcs_is_400(self, client):
        response = client.post("/airtime/total", json={"msdu_size": 100, "mcs_index": 99})
        assert response.status_code == 400

    def test_per_point_matches_core(self, client):
        body = client.post("/per/point", json={
            "msdu_size": 100, "agg_depth": 4, "mcs_index": 8,
            "channel_kind": "interference", "error_rate": 1e-3,
        }).json()
        profile = default_profile()
        expected = per_for_transmission(
            profile, FrameSpec(100, 4), profile.mcs(8),
            ChannelModel.interference(1e-3), BackoffModel(),
        )
        assert body["per"] == expected

    def test_malformed_body_is_422(self, client):
        assert client.post("/per/point", json={"msdu_size": "x"}).status_code == 422
        assert client.post("/airtime/total", json={}).status_code == 422


class TestSweepEndpoints:
    def test_per_sweep_parity_with_core(self, client):
        body = client.post("/sweep/per", json={
            "error_rates": [1e-3], "msdu_sizes": [100],
            "mcs_indices": [0, 8], "depths": [1, 4],
        }).json()
        spec = SweepSpec(mcs_indices=(0, 8), depths=(1, 4), msdu_sizes=(100,),
                         error_rates=(1e-3,))
        result = run_per_sweep(spec, default_profile(), BackoffModel())
        assert body["cells"] == result.cells
        assert body["profile_fingerprint"] == result.profile_fingerprint

    def test_per_sweep_defaults(self, client):
        body = client.post("/sweep/per", json={}).json()
        assert body["axes"]["error_rates"] == [1e-3, 1e-4, 1e-5]
        assert body["axes"]["msdu_sizes"] == [100]
        assert body["axes"]["depths"] == list(range(1, 33))
        assert body["summary"]["violations"] == 0

    def test_airtime_sweep_defaults(self, client):
        body = client.post("/sweep/airtime", json={"depths": [1, 8, 32]}).json()
        assert body["axes"]["msdu_sizes"] == [100, 1000, 10000]
        assert body["summary"]["infeasible_cells"] > 0

    def test_policy_sweep_summary(self, client):
        body = client.post("/sweep/policy", json={}).json()
        assert body["summary"]["verdicts"] == {
            "equivalent": 15, "better": 0, "worse": 0, "infeasible": 12,
        }
        assert body["axes"]["start_mcs"] == 8
        assert body["axes"]["depth"] == 8

    def test_policy_sweep_bad_start_mcs(self, client):
        response = client.post("/sweep/policy", json={"start_mcs": 40})
        assert response.status_code == 400

    def test_basic_rate_sweep(self, client):
        body = client.post("/sweep/basic-rate", json={
            "basic_rates": [6, 12], "mcs_indices": [0],
        }).json()
        costs = [c["ovh2_us"] for c in body["cells"]]
        assert costs[1] < costs[0]

    def test_sweep_rejects_invalid_rates(self, client):
        response = client.post("/sweep/per", json={"error_rates": [2.0]})
        assert response.status_code == 400


class TestQueueEndpoint:
    def test_both_variants(self, client):
        body = client.post("/queue/mg1", json={
            "lambda_base": 50, "lambda_retry": 60, "mu": 100, "sigma": 1e-4,
        }).json()
        assert body["as_written"]["penalty"] == pytest.approx(0.45, rel=1e-12)
        assert body["as_written"]["term_retry"] == pytest.approx(1.2, rel=1e-12)
        assert body["textbook"]["penalty"] == pytest.approx(0.3, rel=1e-12)
        assert "sigma" in body["sigma_note"]

    def test_unstable_is_400(self, client):
        response = client.post("/queue/mg1", json={
            "lambda_base": 50, "lambda_retry": 100, "mu": 100, "sigma": 1e-4,
        })
        assert response.status_code == 400
        assert "utilization" in response.json()["detail"]
